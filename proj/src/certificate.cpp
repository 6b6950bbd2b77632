#include "quadcert/certificate.hpp"

#include <mpfr.h>

#include <iomanip>
#include <json.hpp>
#include <ostream>
#include <sstream>

namespace quadcert {

using ordered_json = nlohmann::ordered_json;

CandidateInputs RunConfig::inputs() const {
    CandidateInputs in;
    in.delta_exp = delta_exp;
    in.iota = iota;
    in.eps_exp = eps_exp;
    in.s_alpha1 = s_alpha1;
    in.s_gamma1 = s_gamma1;
    in.s_gamma2 = s_gamma2;
    in.s_lambda0 = s_lambda0;
    return in;
}

long RunConfig::effective_orbit_bits() const {
    return orbit_bits > 0 ? orbit_bits : orbit_precision_bits(eps_exp);
}

namespace {

CheckOutcome check_at(const RunConfig& cfg, long bits) {
    const Precision p(bits);
    CheckOutcome out;
    out.prec_bits = bits;
    out.setup = setup_from_inputs(cfg.inputs(), cfg.mode, p);
    out.nr = geometric_tail(out.setup.start.lambda0, 1, p);
    const FreeChoices choices{Interval::from_decimal(cfg.s_alpha1, p),
                              Interval::from_decimal(cfg.s_gamma1, p),
                              Interval::from_decimal(cfg.s_gamma2, p)};
    try {
        out.aux = evaluate_chain(out.setup.start, out.setup.geom, choices,
                                 cfg.mode, p);
        out.report =
            check_conditions(out.setup.start, out.setup.geom, out.aux, cfg.mode);
        out.alpha1_tau1 = out.aux.alpha1 * out.aux.tau1;
        out.chain_ok = true;
    } catch (const ChainSingularity& e) {
        out.chain_ok = false;
        out.chain_error = e.what();
    } catch (const DivisionByZeroInterval& e) {
        out.chain_ok = false;
        out.chain_error = e.what();
    } catch (const OverflowError& e) {
        out.chain_ok = false;
        out.chain_error = e.what();
    } catch (const DomainError& e) {
        out.chain_ok = false;
        out.chain_error = e.what();
    }
    if (!out.chain_ok) {
        // The chain blew up on degenerate-but-valid inputs; the head
        // conditions still tell the user which hypothesis broke first.
        out.report = head_conditions(out.setup.start, cfg.mode, p);
        out.aux = AuxChain{};
        out.alpha1_tau1 = Interval();
    }
    return out;
}

}  // namespace

DeriveOutcome run_derive(const RunConfig& cfg) {
    long bits = cfg.chain_bits;
    for (int attempt = 0;; ++attempt) {
        try {
            DeriveOutcome out;
            out.prec_bits = bits;
            out.setup = setup_from_inputs(cfg.inputs(), cfg.mode, Precision(bits));
            return out;
        } catch (const AmbiguousFloor&) {
            if (cfg.pinned_precision || attempt >= cfg.max_retries) throw;
            bits *= 2;
        }
    }
}

CheckOutcome run_check(const RunConfig& cfg) {
    long bits = cfg.chain_bits;
    for (int attempt = 0;; ++attempt) {
        try {
            return check_at(cfg, bits);
        } catch (const AmbiguousFloor&) {
            if (cfg.pinned_precision || attempt >= cfg.max_retries) throw;
            bits *= 2;
        }
    }
}

CertifyOutcome run_certify(const RunConfig& cfg) {
    CertifyOutcome out;
    out.check = run_check(cfg);
    if (!out.check.chain_ok) {
        out.verdict = out.check.report.overall == Verdict::refuted ? "failed"
                                                                   : "undecided";
        return out;
    }
    if (out.check.report.overall == Verdict::refuted) {
        // A refuted chain can never certify; don't pay for the orbit runs.
        out.verdict = "failed";
        return out;
    }
    long bits = cfg.effective_orbit_bits();
    for (int attempt = 0;; ++attempt) {
        try {
            out.orbit = verify_orbit(out.check.setup, Precision(bits));
            break;
        } catch (const PrecisionExhausted&) {
            if (cfg.pinned_precision || attempt >= cfg.max_retries) throw;
            bits *= 2;
        } catch (const UndecidedMargin&) {
            if (cfg.pinned_precision || attempt >= cfg.max_retries) throw;
            bits *= 2;
        }
    }
    const bool orbit_refuted =
        out.orbit.a2 == Verdict::refuted || out.orbit.a3 == Verdict::refuted ||
        out.orbit.a4 == Verdict::refuted || out.orbit.n1_ok == Verdict::refuted;
    if (out.check.report.overall == Verdict::proved && out.orbit.all_proved()) {
        out.verdict = "certified";
        out.bound =
            measure_bound(out.check.aux.eta, out.check.setup.window.omega_len());
    } else if (out.check.report.overall == Verdict::refuted || orbit_refuted) {
        out.verdict = "failed";
    } else {
        out.verdict = "undecided";
    }
    return out;
}

namespace {

ordered_json iv(const Interval& v) {
    return ordered_json{{"lo", v.lo_string()}, {"hi", v.hi_string()}};
}

// Orbit runs carry tens of thousands of bits; round the serialized enclosures
// outward to 256 bits so certificates stay readable (still valid bounds).
ordered_json iv_short(const Interval& v) {
    if (v.precision().bits <= 256) return iv(v);
    return iv(v.rounded_to(Precision(256)));
}

ordered_json inputs_json(const RunConfig& cfg) {
    return ordered_json{{"delta_exp", cfg.delta_exp}, {"iota", cfg.iota},
                        {"eps_exp", cfg.eps_exp},     {"s_alpha1", cfg.s_alpha1},
                        {"s_gamma1", cfg.s_gamma1},   {"s_gamma2", cfg.s_gamma2},
                        {"s_lambda0", cfg.s_lambda0}};
}

ordered_json inputs_json(const CandidateInputs& in) {
    return ordered_json{{"delta_exp", in.delta_exp}, {"iota", in.iota},
                        {"eps_exp", in.eps_exp},     {"s_alpha1", in.s_alpha1},
                        {"s_gamma1", in.s_gamma1},   {"s_gamma2", in.s_gamma2},
                        {"s_lambda0", in.s_lambda0}};
}

ordered_json start_json(const StartingConstants& s) {
    return ordered_json{{"N", s.N},
                        {"delta", iv(s.delta)},
                        {"iota", iv(s.iota)},
                        {"C1", iv(s.C1)},
                        {"lambda", iv(s.lambda)},
                        {"alpha0", iv(s.alpha0)},
                        {"lambda0", iv(s.lambda0)},
                        {"alpha0_definitional", s.alpha0_definitional}};
}

ordered_json geom_json(const GeometryBounds& g) {
    return ordered_json{{"M1", iv(g.M1)},       {"M2", iv(g.M2)},
                        {"L1", iv(g.L1)},       {"L2", iv(g.L2)},
                        {"N1", g.N1},           {"I_len", iv(g.I_len)},
                        {"kappa", iv(g.kappa)}, {"D2", iv(g.D2)},
                        {"D3", iv(g.D3)},       {"Ntilde", g.Ntilde}};
}

ordered_json chain_json(const AuxChain& a) {
    ordered_json j;
    j["alpha1"] = iv(a.alpha1);
    j["D1"] = iv(a.D1);
    j["gamma0"] = iv(a.gamma0);
    j["gamma1max"] = iv(a.gamma1max);
    j["gamma1"] = iv(a.gamma1);
    j["gamma2"] = iv(a.gamma2);
    j["gamma"] = iv(a.gamma);
    j["Dhat"] = iv(a.Dhat);
    j["Dhathat"] = iv(a.Dhathat);
    j["Dist"] = iv(a.Dist);
    j["Gamma1"] = iv(a.Gamma1);
    j["k0"] = iv(a.k0);
    j["tau1"] = iv(a.tau1);
    j["tau0"] = iv(a.tau0);
    j["C3"] = iv(a.C3);
    j["C3tilde"] = iv(a.C3tilde);
    j["gamma1min"] = iv(a.gamma1min);
    j["tau"] = iv(a.tau);
    j["alpha"] = iv(a.alpha);
    j["etatilde"] = iv(a.etatilde);
    j["eta"] = iv(a.eta);
    return j;
}

ordered_json report_json(const ConditionReport& r) {
    ordered_json rows = ordered_json::array();
    for (const ConditionRow& row : r.rows)
        rows.push_back(ordered_json{{"name", row.name},
                                    {"holds", to_string(row.holds)},
                                    {"margin", iv_short(row.margin)}});
    ordered_json j;
    j["overall"] = to_string(r.overall);
    if (r.first_failing)
        j["first_failing"] = *r.first_failing;
    else
        j["first_failing"] = nullptr;
    j["rows"] = rows;
    return j;
}

ordered_json orbit_block(const OrbitVerdicts& o) {
    ordered_json j;
    j["precision_bits"] = o.prec_bits;
    j["a2"] = to_string(o.a2);
    j["a3"] = to_string(o.a3);
    j["a4"] = to_string(o.a4);
    j["n1_ok"] = to_string(o.n1_ok);
    if (o.ntilde)
        j["ntilde"] = *o.ntilde;
    else
        j["ntilde"] = nullptr;
    j["a3_margin"] = iv_short(o.a3_margin);
    j["range_len"] = iv_short(o.range_len);
    j["a4_margin"] = iv_short(o.a4_margin);
    j["d2_direct"] = iv_short(o.d2_direct);
    j["d3_direct"] = iv_short(o.d3_direct);
    j["all_proved"] = o.all_proved();
    return j;
}

// Discrepancies between this artifact and the source theorem's write-up;
// pinned wording, embedded in every certificate.
const char* const kNotes[3] = {
    "The headline coefficient 0.97 of the source theorem is NOT reproduced: "
    "it is inconsistent with the theorem's own eta ~ 0.08271.  This artifact "
    "certifies the bound (1 - eta)|Omega| ~ 0.9173|Omega| instead.",
    "Modes strict and compat differ in D1, gamma0, tau and the C1b margin "
    "(and in everything downstream of those); compat follows the reference "
    "sheet line for line and is the source of all golden values.",
    "The reference sheet's printed table is internally inconsistent at "
    "the 1e-8 level; the enclosures certified here are self-consistent and "
    "tighter than that noise."};

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string derive_json(const DeriveOutcome& out, const RunConfig& cfg) {
    ordered_json j;
    j["schema_version"] = "1";
    j["family"] = "quadratic";
    j["command"] = "derive";
    j["mode"] = to_string(cfg.mode);
    j["precision_bits"] = out.prec_bits;
    j["inputs"] = inputs_json(cfg);
    j["starting_constants"] = start_json(out.setup.start);
    j["geometry"] = geom_json(out.setup.geom);
    return dump(j);
}

std::string check_json(const CheckOutcome& out, const RunConfig& cfg) {
    ordered_json j;
    j["schema_version"] = "1";
    j["family"] = "quadratic";
    j["command"] = "check";
    j["mode"] = to_string(cfg.mode);
    j["precision_bits"] = out.prec_bits;
    j["inputs"] = inputs_json(cfg);
    j["starting_constants"] = start_json(out.setup.start);
    j["geometry"] = geom_json(out.setup.geom);
    if (out.chain_ok) {
        j["chain"] = chain_json(out.aux);
        j["extras"] =
            ordered_json{{"alpha1_tau1", iv(out.alpha1_tau1)}, {"nr", iv(out.nr)}};
        j["chain_error"] = nullptr;
    } else {
        j["chain"] = nullptr;
        j["extras"] = ordered_json{{"alpha1_tau1", nullptr}, {"nr", iv(out.nr)}};
        j["chain_error"] = out.chain_error;
    }
    j["conditions"] = report_json(out.report);
    return dump(j);
}

std::string certificate_json(const CertifyOutcome& out, const RunConfig& cfg) {
    ordered_json j;
    j["schema_version"] = "1";
    j["family"] = "quadratic";
    j["mode"] = to_string(cfg.mode);
    j["precision_bits"] = out.check.prec_bits;
    j["inputs"] = inputs_json(cfg);
    j["starting_constants"] = start_json(out.check.setup.start);
    j["geometry"] = geom_json(out.check.setup.geom);
    if (out.check.chain_ok)
        j["chain"] = chain_json(out.check.aux);
    else
        j["chain"] = nullptr;
    j["conditions"] = report_json(out.check.report);
    j["orbit"] = orbit_block(out.orbit);
    j["verdict"] = out.verdict;
    if (out.bound)
        j["measure_bound"] = iv(*out.bound);
    else
        j["measure_bound"] = nullptr;
    j["notes"] = ordered_json::array({kNotes[0], kNotes[1], kNotes[2]});
    return dump(j);
}

std::string tune_json(const TuneResult& result, FormulaMode mode, long budget,
                      long prec_bits, std::size_t frontier_cap) {
    ordered_json j;
    j["schema_version"] = "1";
    j["command"] = "tune";
    j["mode"] = to_string(mode);
    j["precision_bits"] = prec_bits;
    j["budget"] = budget;
    j["evaluated"] = result.evaluated;
    if (result.best) {
        ordered_json b;
        b["inputs"] = inputs_json(result.best->inputs);
        b["eta"] = result.best->eta ? iv(*result.best->eta) : ordered_json(nullptr);
        b["conditions"] = result.best->has_report
                              ? report_json(result.best->report)
                              : ordered_json(nullptr);
        j["best"] = b;
    } else {
        j["best"] = nullptr;
    }
    ordered_json frontier = ordered_json::array();
    for (std::size_t i = 0; i < result.frontier.size() && i < frontier_cap; ++i) {
        const CandidateResult& r = result.frontier[i];
        frontier.push_back(
            ordered_json{{"inputs", inputs_json(r.inputs)},
                         {"eta", r.eta ? iv(*r.eta) : ordered_json(nullptr)}});
    }
    j["frontier"] = frontier;
    j["frontier_total"] = result.frontier.size();
    ordered_json fails;
    for (const auto& [label, count] : result.failures) fails[label] = count;
    j["failures"] = fails.is_null() ? ordered_json::object() : fails;
    j["winner_orbit"] = result.winner_orbit ? orbit_block(*result.winner_orbit)
                                            : ordered_json(nullptr);
    return dump(j);
}

std::string orbit_json(const OrbitVerdicts& verdicts, const RunConfig& cfg) {
    ordered_json j;
    j["schema_version"] = "1";
    j["family"] = "quadratic";
    j["command"] = "orbit-verify";
    j["mode"] = to_string(cfg.mode);
    j["inputs"] = inputs_json(cfg);
    j["orbit"] = orbit_block(verdicts);
    return dump(j);
}

namespace {

// 15 significant digits of a decimal-scientific string, correctly rounded.
// Pure function of the text, so report(parse(emit(x))) is reproducible.
std::string sig15(const std::string& dec) {
    mpfr_t x;
    mpfr_init2(x, 128);
    const int rc = mpfr_set_str(x, dec.c_str(), 10, MPFR_RNDN);
    std::string outvalue;
    if (rc == 0 && dec.find_first_not_of(" \t") != std::string::npos) {
        char buf[64];
        mpfr_snprintf(buf, sizeof buf, "%.14Re", x);
        outvalue = buf;
    } else {
        outvalue = dec;
    }
    mpfr_clear(x);
    return outvalue;
}

void value_cell(std::ostream& os, const ordered_json& v) {
    if (v.is_null()) {
        os << "-";
    } else if (v.is_object() && v.contains("lo") && v.contains("hi")) {
        os << std::left << std::setw(24) << sig15(v["lo"].get<std::string>())
           << sig15(v["hi"].get<std::string>());
    } else if (v.is_string()) {
        os << v.get<std::string>();
    } else {
        os << v.dump();
    }
}

void conditions_section(std::ostream& os, const ordered_json& v) {
    os << "conditions:\n";
    os << "  " << std::left << std::setw(22) << "overall";
    value_cell(os, v["overall"]);
    os << "\n  " << std::left << std::setw(22) << "first_failing";
    value_cell(os, v["first_failing"]);
    os << "\n";
    for (const ordered_json& row : v["rows"]) {
        os << "  " << std::left << std::setw(22)
           << row["name"].get<std::string>() << std::setw(11)
           << row["holds"].get<std::string>();
        value_cell(os, row["margin"]);
        os << "\n";
    }
}

void object_section(std::ostream& os, const std::string& name,
                    const ordered_json& obj) {
    os << name << ":\n";
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        os << "  " << std::left << std::setw(22) << it.key();
        value_cell(os, it.value());
        os << "\n";
    }
}

std::string render_document(const ordered_json& j) {
    std::ostringstream os;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        const ordered_json& v = it.value();
        if (v.is_object() && v.contains("lo") && v.contains("hi")) {
            os << std::left << std::setw(24) << key;
            value_cell(os, v);
            os << "\n";
        } else if (key == "conditions" && v.is_object()) {
            conditions_section(os, v);
        } else if (v.is_object()) {
            object_section(os, key, v);
        } else if (v.is_array()) {
            os << key << ":\n";
            for (const ordered_json& el : v)
                os << "  - "
                   << (el.is_string() ? el.get<std::string>() : el.dump())
                   << "\n";
        } else {
            os << key << ": ";
            value_cell(os, v);
            os << "\n";
        }
    }
    return os.str();
}

}  // namespace

std::string check_text(const CheckOutcome& out, const RunConfig& cfg) {
    return report_text(check_json(out, cfg));
}

std::string report_text(const std::string& document_json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(document_json_text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("document is not valid JSON: ") +
                           e.what());
    }
    if (!j.is_object()) throw InvalidInput("document is not a JSON object");
    if (j.value("schema_version", "") != "1" || !j.contains("family"))
        throw InvalidInput("document is not a schema-1 quadcert report");
    return render_document(j);
}

}  // namespace quadcert
