#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <random>
#include <string>

#include "quadcert/quadratic.hpp"

using namespace quadcert;

namespace {

const Precision P256(256);

Interval dec(const std::string& s) { return Interval::from_decimal(s, P256); }

// |x - ref| <= rtol * |ref|, checked in interval arithmetic.
bool near(const Interval& x, const std::string& ref, const std::string& rtol) {
    const Interval o = Interval::from_decimal(ref, P256);
    return abs(x - o).provably_le(dec(rtol) * abs(o));
}

}  // namespace

TEST_CASE("expansivity constants match the frozen evaluation oracle") {
    // Oracle: 120-digit multiprecision evaluation of the closed forms.
    auto [C1, lam] = expansivity_constants(dec("0.001"), dec("0.5"),
                                           window_from_eps(dec("0.01")));
    CHECK(near(C1, "0.99987511717092074", "1e-12"));
    CHECK(near(lam, "-3.9108214375059702", "1e-12"));
    CHECK(C1.provably_positive());
    CHECK(C1.provably_lt(dec("1")));
}

TEST_CASE("C1 stays in (0,1] and lambda below ln 2 across random inputs") {
    std::mt19937 rng(20240817u);
    std::uniform_int_distribution<long> dexp(5, 300);
    std::uniform_int_distribution<int> ifrac(10, 90);
    const Interval ln2 = log(dec("2"));
    for (int k = 0; k < 60; ++k) {
        const long d = dexp(rng);
        const long e = 2 * d + 1 + (k % 50);  // eps within provable reach of delta^2
        char iota[8];
        std::snprintf(iota, sizeof iota, "0.%02d", ifrac(rng));
        auto [C1, lam] =
            expansivity_constants(Interval::pow10(-d, P256),
                                  Interval::from_decimal(iota, P256),
                                  window_from_eps_exp(e, P256));
        CHECK(C1.provably_positive());
        CHECK(C1.provably_le(dec("1.000000000000000001")));
        CHECK(lam.provably_lt(ln2));
    }
}

TEST_CASE("escape time at desk and published scale") {
    CHECK(escape_time_N(window_from_eps_exp(100, P256), P256) == 165);
    CHECK(escape_time_N(window_from_eps_exp(4990, P256), P256) == 8287);
}

TEST_CASE("escape time is non-increasing in eps") {
    long prev = escape_time_N(window_from_eps_exp(10, P256), P256);
    for (long e = 11; e <= 40; ++e) {
        const long n = escape_time_N(window_from_eps_exp(e, P256), P256);
        CHECK(n >= prev);  // smaller eps, later escape
        prev = n;
    }
}

TEST_CASE("escape time rejects eps with 3 eps - eps^2 outside (0,1)") {
    CHECK_THROWS_AS(escape_time_N(window_from_eps(dec("0.9")), P256),
                    InvalidInput);
}

TEST_CASE("base rates: alpha0 * N recovers ln(1/delta) exactly") {
    for (long d : {7L, 50L, 1000L}) {
        for (long N : {3L, 165L, 8287L}) {
            auto [alpha0, lambda0] =
                base_rates(Interval::pow10(-d, P256), N, dec("0.69"));
            const Interval lhs = alpha0 * Interval::point(N, P256);
            const Interval rhs = log(Interval::point(1, P256) /
                                     Interval::pow10(-d, P256));
            CHECK(lhs.intersects(rhs));
            // lambda0 is a convex mix of alpha0 and lambda.
            CHECK(lambda0.provably_le(max(alpha0, dec("0.69"))));
            CHECK(min(alpha0, dec("0.69")).provably_le(lambda0));
        }
    }
}

TEST_CASE("contraction horizon: frozen oracle values at delta = 1e-50") {
    // raw compat floor((100 ln10 + ln(1-delta^iota))/ln4) = 166,
    // raw strict floor((100 ln10 - ln2)/ln4) = 165, with N large.
    const Interval d = Interval::pow10(-50, P256);
    CHECK(contraction_horizon_N1(d, dec("0.5"), 1000, FormulaMode::compat,
                                 P256) == 166);
    CHECK(contraction_horizon_N1(d, dec("0.5"), 1000, FormulaMode::strict,
                                 P256) == 165);
    // The N-1 cap binds when N is small.
    CHECK(contraction_horizon_N1(d, dec("0.5"), 10, FormulaMode::compat,
                                 P256) == 9);
}

TEST_CASE("contraction horizon: small strict case") {
    // 2 delta^2 = 0.245, ln(1/0.245)/ln4 = 1.0146..., floor = 1.
    CHECK(contraction_horizon_N1(dec("0.35"), dec("0.5"), 100,
                                 FormulaMode::strict, P256) == 1);
}

TEST_CASE("parameter derivative bounds match the frozen oracle") {
    auto [D2, D3] = parameter_derivative_bounds(dec("0.61"), 10);
    CHECK(near(D2, "1.5026687100490739", "1e-12"));
    CHECK(near(D3, "2.0107321220401686", "1e-12"));
}

TEST_CASE("parameter derivative bounds: D2 >= 3/2, D3 >= 2 always") {
    // The geometric tail underflows to an enclosure touching 0 for huge N,
    // so the certified bounds can land exactly on 3/2 and 2.
    for (long N : {2L, 10L, 100L, 8287L}) {
        auto [D2, D3] = parameter_derivative_bounds(dec("0.61"), N);
        CHECK(dec("1.5").provably_le(D2));
        CHECK(dec("2").provably_le(D3));
    }
    // A tail >= 1/2 must fail loudly instead of producing a negative D3.
    CHECK_THROWS_AS(parameter_derivative_bounds(dec("0.001"), 2),
                    NonResonanceFailure);
}

TEST_CASE("published-scale setup reproduces the frozen constants") {
    const QuadraticSetup s =
        quadratic_setup(Interval::pow10(-1000, P256), dec("0.8"),
                        window_from_eps_exp(4990, P256), FormulaMode::compat,
                        P256);
    CHECK(s.start.N == 8287);
    CHECK(s.geom.N1 == 3321);
    CHECK(s.geom.Ntilde == 8287);
    CHECK(near(s.start.lambda, "0.69314718055994531", "1e-12"));
    CHECK(near(s.start.alpha0, "0.277855085434300", "1e-12"));
    CHECK(near(s.start.lambda0, "0.610088761534816", "1e-12"));
    CHECK(near(s.start.C1, "1", "1e-50"));
    CHECK(near(s.geom.D2, "1.5", "1e-50"));
    CHECK(near(s.geom.D3, "2", "1e-50"));
    CHECK(near(s.geom.M2, "2", "1e-70"));
    CHECK(near(s.geom.L1, "0.5", "1e-70"));
    CHECK(near(s.geom.I_len, "4", "1e-70"));
    CHECK(near(s.geom.kappa, "1", "1e-70"));
    CHECK(s.start.alpha0_definitional);
    // Strict mode only moves N1 through its own floor formula; here both
    // floors agree.
    const QuadraticSetup t =
        quadratic_setup(Interval::pow10(-1000, P256), dec("0.8"),
                        window_from_eps_exp(4990, P256), FormulaMode::strict,
                        P256);
    CHECK(t.geom.N1 == 3321);
    CHECK(t.start.N == 8287);
}

TEST_CASE("half-scale setup reproduces the frozen constants") {
    const QuadraticSetup s =
        quadratic_setup(Interval::pow10(-500, P256), dec("0.8"),
                        window_from_eps_exp(2495, P256), FormulaMode::compat,
                        P256);
    CHECK(s.start.N == 4143);
    CHECK(s.geom.N1 == 1660);
    CHECK(near(s.start.lambda, "0.69314718055994531", "1e-12"));
    CHECK(near(s.start.alpha0, "0.27788861851243612", "1e-12"));
    CHECK(near(s.start.lambda0, "0.61009546815044347", "1e-12"));
}

TEST_CASE("setup validation rejects out-of-range inputs") {
    const FamilyWindow win = window_from_eps_exp(4990, P256);
    CHECK_THROWS_AS(quadratic_setup(dec("1.5"), dec("0.8"), win,
                                    FormulaMode::compat, P256),
                    InvalidInput);
    CHECK_THROWS_AS(quadratic_setup(Interval::pow10(-1000, P256), dec("1"),
                                    win, FormulaMode::compat, P256),
                    InvalidInput);
    CHECK_THROWS_AS(window_from_eps(dec("1.5")), InvalidInput);
    // lambda < 0 when eps is much larger than delta^2.
    CHECK_THROWS_AS(quadratic_setup(Interval::pow10(-1000, P256), dec("0.8"),
                                    window_from_eps_exp(100, P256),
                                    FormulaMode::compat, P256),
                    InvalidInput);
}

TEST_CASE("window arithmetic is cancellation-free") {
    const FamilyWindow win = window_from_eps_exp(4990, P256);
    const Interval a = win.a_star();
    // 2 - a* must reproduce eps to full precision, not collapse to 0.
    CHECK((Interval::point(2, P256) - a).intersects(win.eps));
    CHECK(win.omega_len().provably_positive());
    CHECK(win.a_box().contains(a));
    CHECK(win.a_box().contains(Interval::point(2, P256)));
}

TEST_CASE("setup is deterministic") {
    auto run = [] {
        return quadratic_setup(Interval::pow10(-500, P256), dec("0.8"),
                               window_from_eps_exp(2495, P256),
                               FormulaMode::compat, P256);
    };
    const QuadraticSetup a = run();
    const QuadraticSetup b = run();
    CHECK(a.start.lambda0.lo_string() == b.start.lambda0.lo_string());
    CHECK(a.start.lambda0.hi_string() == b.start.lambda0.hi_string());
    CHECK(a.geom.D3.hi_string() == b.geom.D3.hi_string());
}
