#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "quadcert/certificate.hpp"

using namespace quadcert;

namespace {

// Exit codes: 0 certified/success, 1 refuted, 2 invalid input,
// 3 undecided / precision exhausted.
constexpr int kOk = 0;
constexpr int kRefuted = 1;
constexpr int kInvalid = 2;
constexpr int kUndecided = 3;

struct CliState {
    RunConfig cfg;
    std::string mode_str = "compat";
    std::string format = "json";
    long budget = 27;
    std::string cost_str = "fast";
    bool serial = false;
    std::vector<long> grid_delta_exp;
    std::vector<std::string> grid_iota;
    std::vector<long> grid_eps_exp;
    std::vector<std::string> grid_s_alpha1, grid_s_gamma1, grid_s_gamma2;
    std::vector<std::string> grid_s_lambda0;
    long frontier_cap = 100;
    long n_max = 0;
    std::string trace_out;
    std::string report_in;
    std::string config_path;
};

void add_common(CLI::App* sub, CliState& st) {
    sub->add_option("--delta-exp", st.cfg.delta_exp,
                    "critical neighbourhood size: delta = 10^-ARG");
    sub->add_option("--iota", st.cfg.iota,
                    "inner exponent iota, a decimal in (0,1)");
    sub->add_option("--eps-exp", st.cfg.eps_exp,
                    "window size: eps = 2 - a* = 10^-ARG");
    sub->add_option("--s-alpha1", st.cfg.s_alpha1,
                    "mix weight for alpha1 between alpha0 and lambda0");
    sub->add_option("--s-gamma1", st.cfg.s_gamma1,
                    "fraction of gamma1max taken as gamma1");
    sub->add_option("--s-gamma2", st.cfg.s_gamma2,
                    "fraction of the remaining gamma headroom taken as gamma2");
    sub->add_option("--s-lambda0", st.cfg.s_lambda0,
                    "mix weight for lambda0 between alpha0 and lambda");
    sub->add_option("--mode", st.mode_str, "formula mode")
        ->check(CLI::IsMember({"compat", "strict"}));
    sub->add_option("--precision", st.cfg.chain_bits,
                    "chain precision in bits; passing it disables auto-retry");
    sub->add_option("--orbit-precision", st.cfg.orbit_bits,
                    "orbit precision in bits (default: derived from eps-exp)");
    sub->add_option("--format", st.format, "output format")
        ->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--config", st.config_path,
                    "INI config file (key = value, # comments); flags override");
    sub->allow_config_extras(CLI::config_extras_mode::error);
}

// CLI11 only processes config files registered on the root app; a config
// attached to a subcommand is parsed here instead.  Streaming the file through
// the subcommand applies values to every option the command line left unset,
// which is exactly the flags-override-config rule the help text promises.
void apply_config(CLI::App* sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read config file: " + path);
    try {
        sub->parse_from_stream(in);
    } catch (const CLI::ParseError& e) {
        throw InvalidInput("config file " + path + ": " + e.what());
    }
}

std::string render(const std::string& json_text, const std::string& format) {
    return format == "text" ? report_text(json_text) : json_text;
}

template <typename T>
std::vector<T> or_default(const std::vector<T>& given, std::vector<T> fallback) {
    return given.empty() ? fallback : given;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "rigorous starting-condition certificates for the family x^2 - a"};
    app.require_subcommand(1);
    CliState st;

    CLI::App* cmd_derive = app.add_subcommand(
        "derive", "print starting constants and geometry for (delta, iota, eps)");
    add_common(cmd_derive, st);

    CLI::App* cmd_check = app.add_subcommand(
        "check", "evaluate the constant chain and the conditions");
    add_common(cmd_check, st);

    CLI::App* cmd_certify = app.add_subcommand(
        "certify", "full pipeline including the orbit runs; emits a certificate");
    add_common(cmd_certify, st);

    CLI::App* cmd_tune =
        app.add_subcommand("tune", "search the free fractions for minimal eta");
    add_common(cmd_tune, st);
    cmd_tune->add_option(
        "--budget", st.budget,
        "total evaluations: the grid first, coordinate descent with the rest");
    cmd_tune->add_option("--cost", st.cost_str, "search cost model")
        ->check(CLI::IsMember({"fast", "certifying"}));
    cmd_tune->add_flag("--serial", st.serial, "force the serial reference sweep");
    cmd_tune->add_option("--grid-delta-exp", st.grid_delta_exp,
                         "grid values for delta-exp");
    cmd_tune->add_option("--grid-iota", st.grid_iota, "grid values for iota");
    cmd_tune->add_option("--grid-eps-exp", st.grid_eps_exp,
                         "grid values for eps-exp");
    cmd_tune->add_option("--grid-s-alpha1", st.grid_s_alpha1,
                         "grid values for s-alpha1");
    cmd_tune->add_option("--grid-s-gamma1", st.grid_s_gamma1,
                         "grid values for s-gamma1");
    cmd_tune->add_option("--grid-s-gamma2", st.grid_s_gamma2,
                         "grid values for s-gamma2");
    cmd_tune->add_option("--grid-s-lambda0", st.grid_s_lambda0,
                         "grid values for s-lambda0");
    cmd_tune->add_option("--frontier-cap", st.frontier_cap,
                         "maximum frontier entries serialized");

    CLI::App* cmd_orbit = app.add_subcommand(
        "orbit-verify", "orbit checks only: (A2)-(A4) and the N1 run");
    add_common(cmd_orbit, st);
    cmd_orbit->add_option("--n-max", st.n_max,
                          "trace length for --trace-out (default: N)");
    cmd_orbit->add_option("--trace-out", st.trace_out,
                          "write the box-orbit trace as TSV to this file");

    CLI::App* cmd_report = app.add_subcommand(
        "report", "render an emitted JSON document as a table");
    cmd_report->add_option("file", st.report_in, "certificate JSON file")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        for (CLI::App* sub : app.get_subcommands())
            if (!st.config_path.empty()) apply_config(sub, st.config_path);
        st.cfg.mode = parse_mode(st.mode_str);
        for (const CLI::App* sub : app.get_subcommands()) {
            const CLI::Option* p = sub->get_option_no_throw("--precision");
            const CLI::Option* o = sub->get_option_no_throw("--orbit-precision");
            if ((p && p->count() > 0) || (o && o->count() > 0))
                st.cfg.pinned_precision = true;
        }

        if (app.got_subcommand(cmd_derive)) {
            const DeriveOutcome out = run_derive(st.cfg);
            std::cout << render(derive_json(out, st.cfg), st.format);
            return kOk;
        }

        if (app.got_subcommand(cmd_check)) {
            const CheckOutcome out = run_check(st.cfg);
            std::cout << render(check_json(out, st.cfg), st.format);
            if (out.report.overall == Verdict::refuted) return kRefuted;
            if (!out.chain_ok || out.report.overall != Verdict::proved)
                return kUndecided;
            return kOk;
        }

        if (app.got_subcommand(cmd_certify)) {
            const CertifyOutcome out = run_certify(st.cfg);
            std::cout << render(certificate_json(out, st.cfg), st.format);
            if (out.verdict == "certified") return kOk;
            return out.verdict == "failed" ? kRefuted : kUndecided;
        }

        if (app.got_subcommand(cmd_tune)) {
            SearchSpace space;
            space.delta_exp = or_default(st.grid_delta_exp, {st.cfg.delta_exp});
            space.iota = or_default(st.grid_iota, {st.cfg.iota});
            space.eps_exp = or_default(st.grid_eps_exp, {st.cfg.eps_exp});
            space.s_alpha1 = or_default(st.grid_s_alpha1, {"0.7", "0.8", "0.9"});
            space.s_gamma1 =
                or_default(st.grid_s_gamma1, {"0.80", "0.85", "0.90"});
            space.s_gamma2 = or_default(st.grid_s_gamma2, {"0.7", "0.8", "0.9"});
            space.s_lambda0 = or_default(st.grid_s_lambda0, {st.cfg.s_lambda0});
            const TuneCost cost = st.cost_str == "certifying"
                                      ? TuneCost::certifying
                                      : TuneCost::fast;
            const Precision p(st.cfg.chain_bits);
            const TuneResult result =
                st.serial ? tune_serial(space, st.budget, st.cfg.mode, p, cost)
                          : tune(space, st.budget, st.cfg.mode, p, cost);
            std::cout << render(
                tune_json(result, st.cfg.mode, st.budget, st.cfg.chain_bits,
                          static_cast<std::size_t>(st.frontier_cap)),
                st.format);
            return result.best ? kOk : kRefuted;
        }

        if (app.got_subcommand(cmd_orbit)) {
            const DeriveOutcome d = run_derive(st.cfg);
            long bits = st.cfg.effective_orbit_bits();
            OrbitVerdicts v;
            for (int attempt = 0;; ++attempt) {
                try {
                    v = verify_orbit(d.setup, Precision(bits));
                    break;
                } catch (const PrecisionExhausted&) {
                    if (st.cfg.pinned_precision || attempt >= st.cfg.max_retries)
                        throw;
                    bits *= 2;
                } catch (const UndecidedMargin&) {
                    if (st.cfg.pinned_precision || attempt >= st.cfg.max_retries)
                        throw;
                    bits *= 2;
                }
            }
            if (!st.trace_out.empty()) {
                const long n_max = st.n_max > 0 ? st.n_max : d.setup.start.N;
                const OrbitTrace trace =
                    iterate_critical(d.setup.window, n_max, Precision(bits));
                std::ofstream out(st.trace_out);
                if (!out)
                    throw InvalidInput("cannot open trace file: " + st.trace_out);
                for (const OrbitStep& s : trace.steps)
                    out << s.n << '\t' << s.c.lo_string() << '\t'
                        << s.c.hi_string() << '\n';
            }
            std::cout << render(orbit_json(v, st.cfg), st.format);
            if (v.all_proved()) return kOk;
            if (v.a2 == Verdict::refuted || v.a3 == Verdict::refuted ||
                v.a4 == Verdict::refuted || v.n1_ok == Verdict::refuted)
                return kRefuted;
            return kUndecided;
        }

        if (app.got_subcommand(cmd_report)) {
            std::ifstream in(st.report_in);
            if (!in) throw InvalidInput("cannot read " + st.report_in);
            std::ostringstream buf;
            buf << in.rdbuf();
            std::cout << report_text(buf.str());
            return kOk;
        }
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUndecided;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUndecided;
    }
    return kInvalid;
}
