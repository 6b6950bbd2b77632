#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "quadcert/orbit.hpp"

using namespace quadcert;

namespace {

const Precision P256(256);
const Precision P512(512);

Interval dec(const std::string& s) { return Interval::from_decimal(s, P256); }

bool near(const Interval& x, const std::string& ref, const std::string& rtol) {
    const Interval o = Interval::from_decimal(ref, P256);
    return abs(x - o).provably_le(dec(rtol) * abs(o));
}

QuadraticSetup desk_setup() {
    return quadratic_setup(Interval::pow10(-40, P256), dec("0.8"),
                           window_from_eps_exp(100, P256), FormulaMode::compat,
                           P256);
}

}  // namespace

TEST_CASE("orbit at a = 2 matches the hand-computed rationals") {
    // c: -2, 2, 2, 2...; dprod: -4, -16, -64; csum_3 = 43/64; c'_3 = 43.
    const OrbitTrace t = iterate_at(Interval::point(2, P256), 3, P256);
    REQUIRE(t.steps.size() == 4);
    CHECK(t.steps[0].c.contains(Interval::point(-2, P256)));
    CHECK(t.steps[1].c.contains(Interval::point(2, P256)));
    CHECK(t.steps[3].c.contains(Interval::point(2, P256)));
    CHECK(t.steps[1].dprod.contains(Interval::point(-4, P256)));
    CHECK(t.steps[3].dprod.contains(Interval::point(-64, P256)));
    CHECK(t.steps[3].csum.contains(dec("0.671875")));  // 43/64
    CHECK(t.steps[1].cprime.contains(Interval::point(3, P256)));
    CHECK(t.steps[2].cprime.contains(Interval::point(11, P256)));
    CHECK(t.steps[3].cprime.contains(Interval::point(43, P256)));
    CHECK(parder_identity_holds(t));
}

TEST_CASE("parameter-derivative identity holds along point orbits") {
    for (const char* a : {"1.5", "1.75", "1.9", "1.99"}) {
        const OrbitTrace t = iterate_at(dec(a), 30, P256);
        CHECK(parder_identity_holds(t));
        // |c'_n| = |csum_n * dprod_n| step by step.
        for (const OrbitStep& s : t.steps) {
            if (s.n == 0) continue;
            CHECK(abs(s.cprime).intersects(abs(s.csum * s.dprod)));
        }
    }
}

TEST_CASE("desk escape time and range length match the frozen oracle") {
    const FamilyWindow win = window_from_eps_exp(100, P512);
    const EscapeResult e = find_Ntilde_escape(
        win, Interval::pow10(-40, P512), Interval::from_decimal("0.8", P512),
        P512);
    CHECK(e.ntilde == 166);
    CHECK(near(e.range_len, "0.55546232449693004515", "1e-12"));
}

TEST_CASE("desk critical orbit stays high: frozen minimum over 1..165") {
    const FamilyWindow win = window_from_eps_exp(100, P512);
    const OrbitTrace t = iterate_at(win.a_star(), 165, P512);
    Interval lo_min = abs(t.steps[1].c);
    for (const OrbitStep& s : t.steps)
        if (s.n >= 1) lo_min = min(lo_min, abs(s.c));
    CHECK(near(lo_min, "1.8559465712953780919", "1e-12"));
}

TEST_CASE("desk A3 margin equals the independently computed floor") {
    // Oracle: margin attained at n = 1: |c_1| - e^{-alpha0},
    // alpha0 = 40 ln10 / 165, giving 1.427763234064978269901563.
    const QuadraticSetup s = desk_setup();
    const OrbitTrace t = iterate_critical(s.window, s.start.N, P512);
    const Interval m = verify_A3(t, s.start.alpha0, s.start.N);
    CHECK(near(m, "1.427763234064978269901563", "1e-12"));
    CHECK(m.provably_positive());
}

TEST_CASE("desk non-resonance margins match the frozen oracle") {
    const QuadraticSetup s = desk_setup();
    const OrbitTrace t = iterate_critical(s.window, 166, P512);
    const NonResonance nr = verify_A4_nonresonance(t, 166, s.start.lambda0);
    // csum -> 2/3, so the A4 margin sits at 1 - |2/3 - 1| = 2/3.
    CHECK(near(nr.a4_margin, "0.6666666666666666666666666666666666666666666666657",
               "1e-12"));
    CHECK(near(nr.d2_direct, "0.75", "1e-12"));
    CHECK(near(nr.d3_direct, "1.5", "1e-12"));
    // Direct orbit bounds are consistent with the a-priori D2/D3 bounds.
    CHECK(nr.d2_direct.provably_le(s.geom.D2));
    CHECK(nr.d3_direct.provably_le(s.geom.D3));
}

TEST_CASE("desk N1 run certifies distance >= 1") {
    const QuadraticSetup s = desk_setup();
    CHECK(verify_N1(s.window, s.start.delta, s.geom.N1, P512) ==
          Verdict::proved);
}

TEST_CASE("N1 refutation along the a = 2 endpoint orbit") {
    // delta = 0.5, eps = 0.1: the third image of Delta_0's endpoint lands at
    // -0.871..., inside distance 1 of the critical point.
    CHECK(verify_N1(window_from_eps(dec("0.1")), dec("0.5"), 5, P256) ==
          Verdict::refuted);
}

TEST_CASE("full desk orbit verdicts") {
    const QuadraticSetup s = desk_setup();
    const OrbitVerdicts v = verify_orbit(s, P512);
    CHECK(v.prec_bits == 512);
    CHECK(v.a2 == Verdict::proved);
    CHECK(v.a3 == Verdict::proved);
    CHECK(v.a4 == Verdict::proved);
    CHECK(v.n1_ok == Verdict::proved);
    CHECK(v.all_proved());
    REQUIRE(v.ntilde.has_value());
    CHECK(*v.ntilde == 166);
}

TEST_CASE("published-window escape search at 24000 bits") {
    const Precision p(24000);
    const FamilyWindow win = window_from_eps_exp(4990, p);
    const EscapeResult e = find_Ntilde_escape(
        win, Interval::pow10(-1000, p), Interval::from_decimal("0.8", p), p);
    CHECK(e.ntilde == 8288);
    CHECK(near(e.range_len, "0.47755451919718686688", "1e-12"));
}

TEST_CASE("published-window critical orbit stays inside (1.5, 2] up to N") {
    const Precision p(24000);
    const FamilyWindow win = window_from_eps_exp(4990, p);
    const OrbitTrace t = iterate_at(win.a_star(), 8287, p);
    Interval lo_min = abs(t.steps[1].c);
    const Interval two = Interval::point(2, p);
    const Interval threehalf = Interval::from_decimal("1.5", p);
    bool in_range = true;
    for (const OrbitStep& s : t.steps) {
        if (s.n == 0) continue;
        lo_min = min(lo_min, abs(s.c));
        if (!(threehalf.provably_lt(s.c) && s.c.provably_le(two)))
            in_range = false;
    }
    CHECK(in_range);
    CHECK(near(lo_min, "1.8768179135981234376", "1e-12"));
    CHECK(parder_identity_holds(t));
}

TEST_CASE("too little precision fails loudly, never silently") {
    // The published-scale box trace needs ~24k bits; at 256 the enclosure blows
    // past the width cap and must throw instead of reporting nonsense.
    const FamilyWindow win = window_from_eps_exp(4990, P256);
    CHECK_THROWS_AS(iterate_critical(win, 8287, P256), PrecisionExhausted);
}

TEST_CASE("escape search respects its limit") {
    const FamilyWindow win = window_from_eps_exp(100, P512);
    try {
        find_Ntilde_escape(win, Interval::pow10(-40, P512),
                           Interval::from_decimal("0.8", P512), P512, 50);
        CHECK(false);
    } catch (const NotFound& e) {
        CHECK(e.limit == 50);
    }
}

TEST_CASE("orbit precision policy") {
    CHECK(orbit_precision_bits(100) == 512);
    CHECK(orbit_precision_bits(4990) == 24000);
    long prev = 0;
    for (long e = 10; e <= 300; e += 10) {
        const long b = orbit_precision_bits(e);
        CHECK(b >= 256);
        CHECK(b % 64 == 0);
        CHECK(b >= prev);
        prev = b;
    }
}

TEST_CASE("orbit verification is deterministic") {
    const QuadraticSetup s = desk_setup();
    const OrbitVerdicts a = verify_orbit(s, P512);
    const OrbitVerdicts b = verify_orbit(s, P512);
    CHECK(a.a3_margin.lo_string() == b.a3_margin.lo_string());
    CHECK(a.range_len.hi_string() == b.range_len.hi_string());
    CHECK(a.a4_margin.lo_string() == b.a4_margin.lo_string());
}
