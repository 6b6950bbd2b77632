#pragma once

#include <utility>

#include "quadcert/chain.hpp"

namespace quadcert {

// Parameter window Omega = [a*, 2] of the family f_a(x) = x^2 - a, stored as
// eps = 2 - a*.  All derived expressions are rewritten in eps so that nothing
// ever subtracts two nearly-equal quantities (a* = 2 - 10^{-4990} would wipe
// out a plain 256-bit significand).
struct FamilyWindow {
    Interval eps;

    Interval a_star() const;    // 2 - eps, outward
    Interval a_box() const;     // the full interval [a*, 2]
    Interval omega_len() const { return eps; }
};

FamilyWindow window_from_eps(const Interval& eps);  // requires 0 < eps < 1
FamilyWindow window_from_eps_exp(long eps_exp, Precision prec);  // eps = 10^-e

struct QuadraticSetup {
    FamilyWindow window;
    StartingConstants start;
    GeometryBounds geom;
};

// (C1, lambda) of the expansivity condition:
//   C1 = sqrt((4 - delta^{2 iota}) / (4 - delta^2))
//   lambda = ln(2 delta sqrt((4 - delta^2) / (4 s - s^2))),  s = delta^2 + eps
// the radicand form 4s - s^2 being the cancellation-free rewrite of
// 4 - (delta^2 - a*)^2.
std::pair<Interval, Interval> expansivity_constants(const Interval& delta,
                                                    const Interval& iota,
                                                    const FamilyWindow& window);

// N = floor(ln(1/(3 eps - eps^2)) / ln 4).
long escape_time_N(const FamilyWindow& window, Precision prec);

// (alpha0, lambda0) = (ln(1/delta)/N, (1-s)*alpha0 + s*lambda); the mix
// weight s defaults to 0.8.
std::pair<Interval, Interval> base_rates(const Interval& delta, long N,
                                         const Interval& lambda);
std::pair<Interval, Interval> base_rates(const Interval& delta, long N,
                                         const Interval& lambda,
                                         const Interval& s_lambda0);

// Largest count of iterates the critical neighbourhood provably stays away
// from the critical point, capped at N-1.
long contraction_horizon_N1(const Interval& delta, const Interval& iota, long N,
                            FormulaMode mode, Precision prec);

// (D2, D3) from the geometric 3^i lower bound on the derivative products:
// D2 = 3/2 + t, D3 = 1/(1/2 - t) with t the geometric tail at n = N.
std::pair<Interval, Interval> parameter_derivative_bounds(const Interval& lambda0,
                                                          long N);

QuadraticSetup quadratic_setup(const Interval& delta, const Interval& iota,
                               const FamilyWindow& window, FormulaMode mode,
                               Precision prec);
QuadraticSetup quadratic_setup(const Interval& delta, const Interval& iota,
                               const FamilyWindow& window, FormulaMode mode,
                               Precision prec, const Interval& s_lambda0);

}  // namespace quadcert
