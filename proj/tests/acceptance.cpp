// Acceptance gate for the quadcert deliverable.  Each criterion prints
// exactly one PASS/FAIL line; the exit code is the number of failures.
//
//   1. `check` reproduces the 31 printed reference-sheet values (plus the
//      alpha1*tau1 display) at each value's demonstrated precision, < 2 s.
//   2. `certify` at the published configuration certifies with
//      1 - eta in [0.9172, 0.9174] and |Omega'| > 10^-5000, < 10 min.
//   3. Orbit runs: the 10^-100 desk window proves (A2)-(A4) + N1 < 5 s; the
//      published window's critical orbit stays in (1.5, 2] through n = 8287,
//      escapes at 8288, and satisfies the derivative identity at every step.
//   4. 1000 random configurations: doubling the precision never flips a
//      proved/refuted verdict, never widens eta, and reruns are byte-equal.
//   5. strict and compat modes agree byte-for-byte on alpha1, tau1, Dhathat,
//      diverge on D1, gamma0, tau, C1b, and both certify.
//   6. The 27-point tuner sweep equals the exhaustive argmin and lands at
//      eta <= 0.0827086, < 60 s.

#include <array>
#include <chrono>
#include <cstdio>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "quadcert/certificate.hpp"

using namespace quadcert;
using nlohmann::ordered_json;

namespace {

std::string g_cli;

struct RunOutput {
    int exit_code = -1;
    std::string out;
    double seconds = 0.0;
};

RunOutput run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " 2>/dev/null";
    RunOutput r;
    const auto t0 = std::chrono::steady_clock::now();
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf;
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
    return r;
}

const Precision P256(256);

Interval dec(const std::string& s) { return Interval::from_decimal(s, P256); }

// Both enclosure endpoints within rel_tol of the printed reference value.
bool agrees(const ordered_json& iv, const std::string& printed,
            const std::string& rel_tol) {
    const Interval ref = dec(printed);
    const Interval tol = dec(rel_tol) * abs(ref);
    const std::string lo = iv.at("lo"), hi = iv.at("hi");
    return abs(dec(lo) - ref).provably_le(tol) &&
           abs(dec(hi) - ref).provably_le(tol);
}

ordered_json g_published_cert;  // filled by criterion 2, reused by criterion 3

// ---------------------------------------------------------------------------
// Criterion 1: the reference sheet.

struct SheetEntry {
    const char* where;    // start | geom | chain | extras | margin
    const char* field;    // JSON field name
    const char* printed;  // value as printed on the sheet
    const char* tol;      // demonstrated precision of that printed value
};

// Printed values carry Maple float noise in everything downstream of
// lambda0; tolerances follow the demonstrated agreement of an exact
// 120-digit evaluation with the sheet (>= 1e-10 everywhere, and the three
// heavily amplified distortion constants still agree to 1e-7).
const SheetEntry kSheet[] = {
    {"start", "C1", "1.000000000", "1e-10"},
    {"start", "lambda", "0.693147180559945", "1e-10"},
    {"start", "alpha0", "0.277855085434300", "1e-10"},
    {"start", "lambda0", "0.610088761524283", "1e-10"},
    {"extras", "nr", "0.646331222657726", "1e-10"},
    {"margin", "C1b", "2302.13802490916", "1e-10"},
    {"chain", "alpha1", "0.344301820623978", "1e-10"},
    {"chain", "D1", "30.9713855467660", "2e-9"},
    {"geom", "D2", "1.5", "1e-10"},
    {"geom", "D3", "2.00000000000000", "1e-10"},
    {"chain", "gamma0", "0.0175464029210645", "1e-10"},
    {"chain", "gamma1max", "0.982453597078936", "1e-10"},
    {"chain", "gamma1", "0.835085557517095", "1e-10"},
    {"chain", "gamma2", "0.117894431649472", "1e-10"},
    {"chain", "gamma", "0.970526392087632", "1e-10"},
    {"chain", "Dhat", "11570.3753180732", "4e-9"},
    {"chain", "Dhathat", "0.00256440032673570", "2e-9"},
    {"chain", "Dist", "463434666796857", "1e-7"},
    {"chain", "Gamma1", "4.30876756737302e17", "1e-7"},
    {"chain", "k0", "0.00275809649265672", "2e-9"},
    {"chain", "tau1", "2.09557809691856", "1e-10"},
    {"chain", "tau0", "2.09846800021815", "1e-10"},
    {"margin", "C2", "0.416929994518240", "1e-10"},
    {"chain", "C3", "0.00182183306992661", "2e-9"},
    {"chain", "C3tilde", "1.40784264658478e-22", "1e-7"},
    {"chain", "gamma1min", "0.821673721125574", "1e-10"},
    {"chain", "tau", "12.5909564129903", "1e-10"},
    {"chain", "alpha", "0.00950554901234048", "2e-9"},
    {"chain", "etatilde", "0.998879976396842", "1e-10"},
    {"chain", "eta", "0.0827085919317526", "4e-9"},
    {"extras", "alpha1_tau1", "0.7215113540", "2e-9"},
};

bool criterion1(std::string& detail) {
    const RunOutput r = run_cli("check");
    if (r.exit_code != 0) {
        detail = "check exited " + std::to_string(r.exit_code);
        return false;
    }
    ordered_json j;
    try {
        j = ordered_json::parse(r.out);
    } catch (...) {
        detail = "check output is not JSON";
        return false;
    }
    long ok = 0, total = 0;
    std::string bad;
    // The two integer outputs of the sheet.
    ++total;
    if (j["starting_constants"]["N"] == 8287) ++ok; else bad += " N";
    ++total;
    if (j["geometry"]["N1"] == 3321) ++ok; else bad += " N1";
    for (const SheetEntry& e : kSheet) {
        ++total;
        ordered_json iv;
        const std::string where = e.where;
        if (where == "start") iv = j["starting_constants"][e.field];
        else if (where == "geom") iv = j["geometry"][e.field];
        else if (where == "chain") iv = j["chain"][e.field];
        else if (where == "extras") iv = j["extras"][e.field];
        else {
            for (const auto& row : j["conditions"]["rows"])
                if (row["name"] == e.field) iv = row["margin"];
        }
        if (!iv.is_null() && agrees(iv, e.printed, e.tol)) ++ok;
        else bad += std::string(" ") + e.field;
    }
    std::ostringstream os;
    os << ok << "/" << total
       << " reference-sheet values reproduced at demonstrated precision in "
       << std::fixed << r.seconds << "s";
    if (!bad.empty()) os << "; mismatched:" << bad;
    detail = os.str();
    return ok == total && r.seconds < 2.0;
}

// ---------------------------------------------------------------------------
// Criterion 2: the published certificate.

bool criterion2(std::string& detail) {
    const RunOutput r = run_cli("certify");
    if (r.exit_code != 0) {
        detail = "certify exited " + std::to_string(r.exit_code);
        return false;
    }
    try {
        g_published_cert = ordered_json::parse(r.out);
    } catch (...) {
        detail = "certify output is not JSON";
        return false;
    }
    const ordered_json& j = g_published_cert;
    bool ok = true;
    std::string why;
    if (j["verdict"] != "certified") { ok = false; why += " verdict"; }
    const Interval eta =
        hull(dec(j["chain"]["eta"]["lo"].get<std::string>()),
             dec(j["chain"]["eta"]["hi"].get<std::string>()));
    const Interval one_minus = dec("1") - eta;
    if (!(dec("0.9172").provably_le(one_minus) &&
          one_minus.provably_le(dec("0.9174")))) {
        ok = false;
        why += " 1-eta";
    }
    if (j["measure_bound"].is_null() ||
        !dec("1e-5000").provably_lt(
            dec(j["measure_bound"]["lo"].get<std::string>()))) {
        ok = false;
        why += " measure_bound";
    }
    const std::string note = j["notes"].empty() ? "" : j["notes"][0];
    if (note.find("0.97") == std::string::npos) { ok = false; why += " notes"; }
    if (r.seconds >= 600.0) { ok = false; why += " time"; }
    std::ostringstream os;
    os << "verdict=" << j["verdict"].get<std::string>()
       << ", 1-eta in [0.9172, 0.9174], |Omega'| > 1e-5000, headline note "
          "present, "
       << std::fixed << r.seconds << "s";
    if (!ok) os << "; failed:" << why;
    detail = os.str();
    return ok;
}

// ---------------------------------------------------------------------------
// Criterion 3: orbit runs at both scales.

bool criterion3(std::string& detail) {
    const RunOutput desk = run_cli("orbit-verify --delta-exp 40 --eps-exp 100");
    bool ok = true;
    std::string why;
    double desk_s = desk.seconds;
    if (desk.exit_code != 0) { ok = false; why += " desk-exit"; }
    else {
        const ordered_json j = ordered_json::parse(desk.out);
        if (j["orbit"]["all_proved"] != true) { ok = false; why += " desk-proof"; }
        if (j["orbit"]["ntilde"] != 166) { ok = false; why += " desk-ntilde"; }
    }
    if (desk_s >= 5.0) { ok = false; why += " desk-time"; }

    // Published window, in process: range, identity, escape.
    const auto t0 = std::chrono::steady_clock::now();
    const Precision prec(24000);
    const FamilyWindow window = window_from_eps_exp(4990, prec);
    const OrbitTrace trace = iterate_at(window.a_star(), 8288, prec);
    const Interval lo_wall = Interval::from_decimal("1.5", prec);
    const Interval hi_wall = Interval::from_decimal("2", prec);
    bool in_range = true;
    for (long n = 1; n <= 8287; ++n) {
        const Interval& c = trace.steps[static_cast<std::size_t>(n)].c;
        if (!(lo_wall.provably_lt(c) && c.provably_le(hi_wall)))
            in_range = false;
    }
    if (!in_range) { ok = false; why += " pub-range"; }
    if (!parder_identity_holds(trace)) { ok = false; why += " pub-identity"; }
    const Interval delta = Interval::from_decimal("1e-1000", prec);
    const Interval iota = Interval::from_decimal("0.8", prec);
    const EscapeResult esc = find_Ntilde_escape(window, delta, iota, prec);
    if (esc.ntilde != 8288) { ok = false; why += " pub-escape"; }
    if (!g_published_cert.is_null() &&
        g_published_cert["orbit"]["all_proved"] != true) {
        ok = false;
        why += " pub-cert-orbit";
    }
    const double pub_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::ostringstream os;
    os << "desk (A2)-(A4)+N1 proved in " << std::fixed << desk_s
       << "s; published orbit in (1.5, 2] through 8287, identity holds, "
          "escape at 8288 ("
       << pub_s << "s)";
    if (!ok) os << "; failed:" << why;
    detail = os.str();
    return ok;
}

// ---------------------------------------------------------------------------
// Criterion 4: precision-doubling properties over 1000 random setups.

bool criterion4(std::string& detail) {
    std::mt19937 rng(20260823u);
    const std::vector<std::string> iotas = {"0.7", "0.75", "0.8", "0.85", "0.9"};
    const std::vector<std::string> fracs = {"0.6",  "0.65", "0.7", "0.75",
                                            "0.8",  "0.85", "0.9"};
    const std::vector<std::string> g1s = {"0.80", "0.85", "0.90"};
    long flips = 0, widenings = 0, nondet = 0, skipped = 0;
    long proved = 0, refuted = 0, undecided = 0;
    for (int i = 0; i < 1000; ++i) {
        RunConfig cfg;
        if (i % 4 == 0) {
            // Published-scale draws: the band where chains can prove.
            cfg.delta_exp = 800 + static_cast<long>(rng() % 1201);  // 800..2000
            cfg.eps_exp = 4 * cfg.delta_exp +
                          static_cast<long>(rng() % (2 * cfg.delta_exp + 1));
        } else {
            cfg.delta_exp = 5 + static_cast<long>(rng() % 296);     // 5..300
            cfg.eps_exp = 2 * cfg.delta_exp + 1 +
                          static_cast<long>(rng() % (3 * cfg.delta_exp));
        }
        cfg.iota = iotas[rng() % iotas.size()];
        cfg.s_alpha1 = fracs[rng() % fracs.size()];
        cfg.s_gamma1 = g1s[rng() % g1s.size()];
        cfg.s_gamma2 = fracs[rng() % fracs.size()];
        cfg.s_lambda0 = fracs[rng() % fracs.size()];
        cfg.pinned_precision = true;  // no silent retries: compare 256 vs 512
        RunConfig cfg512 = cfg;
        cfg512.chain_bits = 512;
        try {
            const CheckOutcome a = run_check(cfg);
            const CheckOutcome b = run_check(cfg512);
            if (check_json(a, cfg) != check_json(run_check(cfg), cfg)) ++nondet;
            const Verdict va = a.report.overall, vb = b.report.overall;
            if ((va == Verdict::proved && vb == Verdict::refuted) ||
                (va == Verdict::refuted && vb == Verdict::proved))
                ++flips;
            const std::size_t rows =
                std::min(a.report.rows.size(), b.report.rows.size());
            for (std::size_t k = 0; k < rows; ++k) {
                const Verdict ra = a.report.rows[k].holds;
                const Verdict rb = b.report.rows[k].holds;
                if ((ra == Verdict::proved && rb == Verdict::refuted) ||
                    (ra == Verdict::refuted && rb == Verdict::proved))
                    ++flips;
            }
            if (a.chain_ok && b.chain_ok &&
                b.aux.eta.width_upper() > a.aux.eta.width_upper())
                ++widenings;
            if (va == Verdict::proved) ++proved;
            else if (va == Verdict::refuted) ++refuted;
            else ++undecided;
        } catch (const Error&) {
            ++skipped;
        }
    }
    std::ostringstream os;
    os << "1000 cases (" << proved << " proved, " << refuted << " refuted, "
       << undecided << " undecided, " << skipped << " skipped): " << flips
       << " verdict flips, " << widenings << " width increases, " << nondet
       << " nondeterministic reruns";
    detail = os.str();
    return flips == 0 && widenings == 0 && nondet == 0;
}

// ---------------------------------------------------------------------------
// Criterion 5: mode divergence is exactly {D1, gamma0, tau, C1b}+downstream.

bool criterion5(std::string& detail) {
    RunConfig compat;
    RunConfig strict;
    strict.mode = FormulaMode::strict;
    const CheckOutcome c = run_check(compat);
    const CheckOutcome s = run_check(strict);
    bool ok = true;
    std::string why;
    auto same = [](const Interval& x, const Interval& y) {
        return x.lo_string() == y.lo_string() && x.hi_string() == y.hi_string();
    };
    if (!same(c.aux.alpha1, s.aux.alpha1)) { ok = false; why += " alpha1"; }
    if (!same(c.aux.tau1, s.aux.tau1)) { ok = false; why += " tau1"; }
    if (!same(c.aux.Dhathat, s.aux.Dhathat)) { ok = false; why += " Dhathat"; }
    if (c.aux.D1.intersects(s.aux.D1)) { ok = false; why += " D1"; }
    if (c.aux.gamma0.intersects(s.aux.gamma0)) { ok = false; why += " gamma0"; }
    if (c.aux.tau.intersects(s.aux.tau)) { ok = false; why += " tau"; }
    if (c.report.rows[1].margin.intersects(s.report.rows[1].margin)) {
        ok = false;
        why += " C1b";
    }
    // Frozen strict goldens (120-digit evaluation of the displayed-equation formulas).
    const Interval tol = dec("1e-12");
    auto near = [&](const Interval& x, const char* ref) {
        const Interval o = dec(ref);
        return abs(x - o).provably_le(tol * abs(o));
    };
    if (!near(s.aux.D1, "11.3937360043540")) { ok = false; why += " D1-golden"; }
    if (!near(s.aux.eta, "0.0877363298437149")) { ok = false; why += " eta-golden"; }
    if (s.report.overall != Verdict::proved) { ok = false; why += " strict-chain"; }
    // Both modes certify: compat is criterion 2's certificate; run strict here.
    const std::string compat_verdict =
        g_published_cert.is_null() ? "" : g_published_cert["verdict"].get<std::string>();
    if (compat_verdict != "certified") { ok = false; why += " compat-certify"; }
    const CertifyOutcome strict_cert = run_certify(strict);
    if (strict_cert.verdict != "certified") { ok = false; why += " strict-certify"; }
    std::ostringstream os;
    os << "alpha1/tau1/Dhathat byte-identical, D1/gamma0/tau/C1b disjoint, "
          "strict goldens hold, both modes certify";
    if (!ok) os << "; failed:" << why;
    detail = os.str();
    return ok;
}

// ---------------------------------------------------------------------------
// Criterion 6: tuner equals the exhaustive argmin.

bool criterion6(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    SearchSpace space = SearchSpace::single(RunConfig{}.inputs());
    space.s_alpha1 = {"0.7", "0.8", "0.9"};
    space.s_gamma1 = {"0.80", "0.85", "0.90"};
    space.s_gamma2 = {"0.7", "0.8", "0.9"};
    const TuneResult r = tune(space, 27, FormulaMode::compat, P256);
    bool ok = r.best.has_value() && r.evaluated == 27;
    std::string why = ok ? "" : " no-winner";
    std::optional<Interval> best_direct;
    for (std::size_t i = 0; i < space.grid_size(); ++i) {
        const CandidateResult c =
            evaluate_candidate(space.at(i), FormulaMode::compat, P256);
        if (c.eta && (!best_direct ||
                      mpfr_cmp(c.eta->hi_raw(), best_direct->hi_raw()) < 0))
            best_direct = *c.eta;
    }
    if (ok && (!best_direct ||
               r.best->eta->hi_string() != best_direct->hi_string())) {
        ok = false;
        why += " argmin-mismatch";
    }
    if (ok && !r.best->eta->provably_le(dec("0.0827086"))) {
        ok = false;
        why += " eta-above-bound";
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (secs >= 60.0) { ok = false; why += " time"; }
    std::ostringstream os;
    os << "27-point sweep equals exhaustive argmin, best eta.hi <= 0.0827086, "
       << std::fixed << secs << "s";
    if (!ok) os << "; failed:" << why;
    detail = os.str();
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-quadcert-binary>\n");
        return 64;
    }
    g_cli = argv[1];
    bool (*criteria[])(std::string&) = {criterion1, criterion2, criterion3,
                                        criterion4, criterion5, criterion6};
    int failures = 0;
    for (int i = 0; i < 6; ++i) {
        std::string detail;
        const bool pass = criteria[i](detail);
        std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", i + 1,
                    detail.c_str());
        std::fflush(stdout);
        if (!pass) ++failures;
    }
    return failures;
}
