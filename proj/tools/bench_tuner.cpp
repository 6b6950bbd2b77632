#include <chrono>
#include <cstdio>

#include "quadcert/certificate.hpp"

using namespace quadcert;

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed_s(clock_type::time_point a, clock_type::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

}  // namespace

// Times the parallel grid sweep against the serial reference on the default
// 27-point fraction grid and insists on byte-identical results.
int main() {
    SearchSpace space;
    space.delta_exp = {1000};
    space.iota = {"0.8"};
    space.eps_exp = {4990};
    space.s_alpha1 = {"0.7", "0.8", "0.9"};
    space.s_gamma1 = {"0.80", "0.85", "0.90"};
    space.s_gamma2 = {"0.7", "0.8", "0.9"};
    space.s_lambda0 = {"0.8"};
    const long budget = static_cast<long>(space.grid_size());
    const Precision prec(256);

    const auto t0 = clock_type::now();
    const TuneResult parallel =
        tune(space, budget, FormulaMode::compat, prec, TuneCost::fast);
    const auto t1 = clock_type::now();
    const TuneResult serial =
        tune_serial(space, budget, FormulaMode::compat, prec, TuneCost::fast);
    const auto t2 = clock_type::now();

    const double tp = elapsed_s(t0, t1);
    const double ts = elapsed_s(t1, t2);
    std::printf("grid size   : %ld candidates at %ld bits\n", budget, prec.bits);
    std::printf("parallel    : %8.3f s\n", tp);
    std::printf("serial      : %8.3f s\n", ts);
    std::printf("speedup     : %8.2fx\n", tp > 0 ? ts / tp : 0.0);

    const std::string a =
        tune_json(parallel, FormulaMode::compat, budget, prec.bits);
    const std::string b =
        tune_json(serial, FormulaMode::compat, budget, prec.bits);
    if (a != b) {
        std::fprintf(stderr, "MISMATCH: parallel and serial sweeps disagree\n");
        return 1;
    }
    std::printf("results     : identical\n");
    return 0;
}
