#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quadcert/interval.hpp"

namespace quadcert {

// Which rendition of the constant chain to evaluate.  The two differ only in
// D1, gamma0, tau and the C1b margin; everything else is shared code.
enum class FormulaMode { strict, compat };

std::string to_string(FormulaMode m);
FormulaMode parse_mode(const std::string& s);  // throws InvalidInput

struct StartingConstants {
    long N = 0;
    Interval delta, iota, C1, lambda, alpha0, lambda0;
    // Set when alpha0 was produced as ln(1/delta)/N, in which case the third
    // C1a inequality is an identity and is not re-checked.
    bool alpha0_definitional = false;
};

struct GeometryBounds {
    Interval M1, M2, L1, L2;
    long N1 = 1;
    Interval I_len, kappa, D2, D3;
    long Ntilde = 1;
};

// Mixing fractions: alpha1 = s_alpha1*alpha0 + (1-s_alpha1)*lambda0,
// gamma1 = s_gamma1*gamma1max, gamma2 = s_gamma2*(1-gamma0-gamma1).
struct FreeChoices {
    Interval s_alpha1, s_gamma1, s_gamma2;
};

struct AuxChain {
    Interval alpha1, D1, gamma0, gamma1max, gamma1, gamma2, gamma;
    Interval Dhat, Dhathat, Dist, Gamma1, k0, tau1, tau0, C3, C3tilde;
    Interval gamma1min, tau, alpha, etatilde, eta;
};

enum class Verdict { proved, refuted, undecided };

std::string to_string(Verdict v);

struct ConditionRow {
    std::string name;
    Verdict holds = Verdict::undecided;
    Interval margin;
};

struct ConditionReport {
    std::vector<ConditionRow> rows;  // canonical order, possibly truncated
    Verdict overall = Verdict::undecided;
    std::optional<std::string> first_failing;  // first row not proved
};

// e^{-lambda0*(n+1)} / (1 - e^{-lambda0}): the geometric tail bounding all
// neglected terms of the derivative sums.  Appears in D2/D3 (n = N), in the
// non-resonance margin (n = Ntilde) and as the reference NR constant (n = 1).
Interval geometric_tail(const Interval& lambda0, long n, Precision prec);

AuxChain evaluate_chain(const StartingConstants& start, const GeometryBounds& geom,
                        const FreeChoices& choices, FormulaMode mode,
                        Precision prec);

// C1a and C1b only.  These need nothing beyond the starting constants, so a
// driver can still name the offending condition when the chain itself blows
// up on degenerate inputs (negative lambda and the like).
ConditionReport head_conditions(const StartingConstants& start, FormulaMode mode,
                                Precision prec);

ConditionReport check_conditions(const StartingConstants& start,
                                 const GeometryBounds& geom, const AuxChain& aux,
                                 FormulaMode mode);

// Certified lower bound (1-eta)*omega_len for the surviving parameter mass.
Interval measure_bound(const Interval& eta, const Interval& omega_len);

}  // namespace quadcert
