#pragma once

#include <optional>
#include <vector>

#include "quadcert/quadratic.hpp"

namespace quadcert {

struct OrbitStep {
    long n = 0;
    Interval c;       // c_n(a) = f_a^n(c_0), c_0 = -a
    Interval dprod;   // (f^n)'(c_0) = prod_{j<n} 2 c_j
    Interval csum;    // 1 + sum_{i=1..n} 1/(f^i)'(c_0)
    Interval cprime;  // d c_n / d a  (c'_0 = -1, c'_{n+1} = 2 c_n c'_n - 1)
};

struct OrbitTrace {
    std::vector<OrbitStep> steps;  // steps[n] has index n, n = 0..n_max
    long prec_bits = 0;            // working precision of the run
};

// Interval iteration over the whole parameter box a in [a*, 2].  Throws
// PrecisionExhausted if some c_n with n < n_max grows wider than 1/2.
OrbitTrace iterate_critical(const FamilyWindow& window, long n_max,
                            Precision prec);

// Same recursion with the parameter pinned to one enclosure (typically a
// point: a = a* or a = 2).
OrbitTrace iterate_at(const Interval& a, long n_max, Precision prec);

// |c'_n| and |csum_n * dprod_n| enclose the same exact quantity; false means
// some step's enclosures fail to intersect (which would indicate a bug, not
// a precision problem).
bool parder_identity_holds(const OrbitTrace& trace);

// min over 1 <= n <= N of inf|c_n| - sup e^{-alpha0 n}; (A3) holds when > 0.
Interval verify_A3(const OrbitTrace& trace, const Interval& alpha0, long N);

struct EscapeResult {
    long ntilde = 0;      // smallest n with certified 2 - c_n(a*) >= 1/4
    Interval range_len;   // that distance; a lower bound for |Omega_ntilde|
};

// Point iteration at a = a* to locate the escape time, plus a box pass
// confirming |c_m| >= delta^iota for all m <= ntilde.  n_limit 0 means 2N.
EscapeResult find_Ntilde_escape(const FamilyWindow& window, const Interval& delta,
                                const Interval& iota, Precision prec,
                                long n_limit = 0);

struct NonResonance {
    Interval a4_margin;   // 1 - |sum_{i<=ntilde} 1/(f^i)'(c_0)| - tail
    Interval d2_direct;   // max_k |csum_k| joined with |csum_ntilde| + tail
    Interval d3_direct;   // 1 / min(min_k |csum_k|, a4_margin)
};

// Throws UndecidedMargin(k) when csum_k cannot be bounded away from 0.
NonResonance verify_A4_nonresonance(const OrbitTrace& trace, long ntilde,
                                    const Interval& lambda0);

// Iterates Delta_0 = [-2, delta^2 - a*] over the box and certifies distance
// >= 1 from the critical point for all i <= N1; on failure, attempts a
// refutation along the point orbit at a = 2.
Verdict verify_N1(const FamilyWindow& window, const Interval& delta, long N1,
                  Precision prec);

struct OrbitVerdicts {
    long prec_bits = 0;
    Interval a3_margin;
    std::optional<long> ntilde;
    Interval range_len;
    Interval a4_margin, d2_direct, d3_direct;
    Verdict a2 = Verdict::undecided;
    Verdict a3 = Verdict::undecided;
    Verdict a4 = Verdict::undecided;
    Verdict n1_ok = Verdict::undecided;

    bool all_proved() const;
};

// The full (A2)-(A4) + N1 pass used by certify: one box trace feeding A3 and
// A4, the escape search, and the N1 run.
OrbitVerdicts verify_orbit(const QuadraticSetup& setup, Precision prec);

// Default working precision for eps = 10^{-eps_exp}: enough bits to represent
// eps, plus headroom for the 4^n growth of both widths and derivatives.
long orbit_precision_bits(long eps_exp);

}  // namespace quadcert
