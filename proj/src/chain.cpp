#include "quadcert/chain.hpp"

#include <mpfr.h>

namespace quadcert {

std::string to_string(FormulaMode m) {
    return m == FormulaMode::strict ? "strict" : "compat";
}

FormulaMode parse_mode(const std::string& s) {
    if (s == "strict") return FormulaMode::strict;
    if (s == "compat") return FormulaMode::compat;
    throw InvalidInput("unknown formula mode '" + s + "' (strict|compat)");
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::proved: return "proved";
        case Verdict::refuted: return "refuted";
        default: return "undecided";
    }
}

Interval geometric_tail(const Interval& lambda0, long n, Precision prec) {
    if (n < 0) throw InvalidInput("geometric_tail needs n >= 0");
    Interval l = lambda0.rounded_to(prec);
    Interval one = Interval::point(1, prec);
    Interval den = one - exp(-l);
    if (den.contains_zero()) throw ChainSingularity("geometric_tail");
    return exp(-(l * Interval::point(n + 1, prec))) / den;
}

namespace {

void ensure_finite(const Interval& v, const char* field) {
    if (!mpfr_number_p(v.lo_raw()) || !mpfr_number_p(v.hi_raw()))
        throw OverflowError(std::string(field) + " exceeds the exponent range");
}

const Interval& no_zero(const Interval& den, const char* field) {
    if (den.contains_zero()) throw ChainSingularity(field);
    return den;
}

ConditionRow strict_row(const std::string& name, const Interval& margin) {
    Verdict v = margin.provably_positive()      ? Verdict::proved
                : margin.provably_nonpositive() ? Verdict::refuted
                                                : Verdict::undecided;
    return ConditionRow{name, v, margin};
}

ConditionRow weak_row(const std::string& name, const Interval& margin) {
    Verdict v = margin.provably_nonnegative() ? Verdict::proved
                : margin.provably_negative() ? Verdict::refuted
                                             : Verdict::undecided;
    return ConditionRow{name, v, margin};
}

void finish_report(ConditionReport& rep) {
    rep.overall = Verdict::proved;
    for (const ConditionRow& row : rep.rows) {
        if (row.holds != Verdict::proved && !rep.first_failing)
            rep.first_failing = row.name;
        if (row.holds == Verdict::refuted)
            rep.overall = Verdict::refuted;
        else if (row.holds == Verdict::undecided && rep.overall == Verdict::proved)
            rep.overall = Verdict::undecided;
    }
}

}  // namespace

AuxChain evaluate_chain(const StartingConstants& start, const GeometryBounds& geom,
                        const FreeChoices& choices, FormulaMode mode,
                        Precision prec) {
    if (start.N < 1 || geom.N1 < 1)
        throw InvalidInput("evaluate_chain needs N >= 1 and N1 >= 1");
    const bool compat = (mode == FormulaMode::compat);

    const Interval delta = start.delta.rounded_to(prec);
    const Interval iota = start.iota.rounded_to(prec);
    const Interval C1 = start.C1.rounded_to(prec);
    const Interval lambda = start.lambda.rounded_to(prec);
    const Interval alpha0 = start.alpha0.rounded_to(prec);
    const Interval lambda0 = start.lambda0.rounded_to(prec);
    const Interval L1 = geom.L1.rounded_to(prec);
    const Interval I_len = geom.I_len.rounded_to(prec);
    const Interval kappa = geom.kappa.rounded_to(prec);
    const Interval D2 = geom.D2.rounded_to(prec);
    const Interval D3 = geom.D3.rounded_to(prec);
    const Interval s_a1 = choices.s_alpha1.rounded_to(prec);
    const Interval s_g1 = choices.s_gamma1.rounded_to(prec);
    const Interval s_g2 = choices.s_gamma2.rounded_to(prec);

    const Interval one = Interval::point(1, prec);
    const Interval two = Interval::point(2, prec);
    const Interval five = Interval::point(5, prec);

    const Interval lnd = log(one / delta);  // ln(1/delta) > 0 for delta < 1
    const Interval q = iota * lnd;          // ln(delta^-iota)

    // The mix runs from alpha0 (s = 1) to lambda0 (s = 0).
    const Interval alpha1 = s_a1 * alpha0 + (one - s_a1) * lambda0;
    const Interval x = alpha1 - alpha0;

    const Interval emA = exp(-alpha1);
    const Interval denA = no_zero(one - emA, "D1");
    const Interval emxN = exp(-(Interval::point(geom.N1 + 1, prec) * x));
    const Interval denN = no_zero(one - emxN, "D1");
    const Interval fx = one - exp(-x);
    Interval D1 = [&] {
        if (compat)
            return exp(kappa * (one / denA + emxN / denN * fx));
        return exp(kappa * (emA / denA + emxN / (denN * no_zero(fx, "D1"))));
    }();
    ensure_finite(D1, "D1");

    const Interval gamma0 =
        ((compat ? one : two) + log(two) + five * log(lnd)) / lnd;

    const Interval gamma1max =
        min(one - gamma0, one - (log(one / C1) + two * log(q)) / q);
    const Interval gamma1 = s_g1 * gamma1max;
    const Interval gamma2 = s_g2 * (one - (gamma0 + gamma1));
    const Interval gamma = gamma0 + gamma1 + gamma2;

    const Interval eml = exp(-lambda);
    const Interval denl = no_zero(one - eml, "Dhat");
    const Interval Dhat = two + (two * D2 * D3 * eml / C1) / denl +
                          (two * D1 * D2 * D3 / sqr(L1)) / no_zero(fx, "Dhat");

    const Interval qm1 = no_zero(q - one, "Dhathat");
    const Interval pw = pow(delta, iota * (one - gamma1));
    const Interval d2den = no_zero(sqr(q) - pw / C1, "Dhathat");
    const Interval Dhathat =
        (two + exp(one) * sqr(q) / no_zero(sqr(qm1), "Dhathat")) *
        (sqr(q) / d2den) / qm1;

    const Interval Dist =
        D2 * D3 * exp(kappa * (Dhat * Dhathat + (D2 * D3 * eml / C1) / denl));
    ensure_finite(Dist, "Dist");

    const Interval Gamma1 = Dist * D1 * D2 * D3 * exp(one + lambda0) / (L1 * C1);
    ensure_finite(Gamma1, "Gamma1");

    const Interval k0 =
        max((log(D1 / L1) + lambda0 + alpha1) / no_zero(q, "k0"),
            Interval::point(0, prec));

    const Interval s01 = no_zero(lambda0 + alpha1, "tau1");
    const Interval tau1 = two / s01;
    const Interval tau0 = (two + k0) / s01;
    const Interval C3 = pow(D1, -(lambda0 + two * alpha1) / s01) *
                        pow(L1, two + alpha1 / s01);
    const Interval a1t1 = alpha1 * tau1;
    const Interval C3tilde =
        pow(two, a1t1 - one) * sqr(L1) * C3 /
        no_zero(two * sqr(D1) * Dist * D2 * D3, "C3tilde");

    const Interval gamma1min =
        max(iota + (log(Dist * D2 * D3 / C1) + two * log(q)) / lnd,
            a1t1 + (log(Gamma1 * D2 * D3 / C3tilde * exp(a1t1 - one)) +
                    two * log(q)) / no_zero(q, "gamma1min"));

    const Interval omg1 = no_zero(one - gamma1, "tau");
    Interval tau = [&] {
        if (compat)
            return (tau0 / omg1) *
                   (one + (log(I_len) - log(Gamma1)) / lnd + two * log(q) / lnd);
        return (tau0 / omg1) *
               (one + (log(I_len) + two * log(lnd) - log(Gamma1)) / lnd);
    }();

    const Interval adenom =
        no_zero(tau * (lambda - omg1 / no_zero(tau0, "alpha")) + one, "alpha");
    const Interval alpha = min(alpha0, (lambda - lambda0) / adenom);

    const Interval gden = no_zero(one - exp(-(one - gamma)), "etatilde");
    const Interval etatilde =
        exp(-(gamma2 * alpha)) * (one + pow(delta, one - gamma) / gden);

    const Interval eta =
        pow_int(etatilde, start.N) / no_zero(one - etatilde, "eta");
    ensure_finite(eta, "eta");

    AuxChain aux;
    aux.alpha1 = alpha1;
    aux.D1 = D1;
    aux.gamma0 = gamma0;
    aux.gamma1max = gamma1max;
    aux.gamma1 = gamma1;
    aux.gamma2 = gamma2;
    aux.gamma = gamma;
    aux.Dhat = Dhat;
    aux.Dhathat = Dhathat;
    aux.Dist = Dist;
    aux.Gamma1 = Gamma1;
    aux.k0 = k0;
    aux.tau1 = tau1;
    aux.tau0 = tau0;
    aux.C3 = C3;
    aux.C3tilde = C3tilde;
    aux.gamma1min = gamma1min;
    aux.tau = tau;
    aux.alpha = alpha;
    aux.etatilde = etatilde;
    aux.eta = eta;
    return aux;
}

ConditionReport head_conditions(const StartingConstants& start, FormulaMode mode,
                                Precision prec) {
    const Interval delta = start.delta.rounded_to(prec);
    const Interval lambda = start.lambda.rounded_to(prec);
    const Interval alpha0 = start.alpha0.rounded_to(prec);
    const Interval lambda0 = start.lambda0.rounded_to(prec);
    const Interval one = Interval::point(1, prec);
    const Interval lnd = log(one / delta);

    // C1a: lambda > lambda0 > alpha0 (strict), alpha0 >= ln(1/delta)/N (weak;
    // skipped when alpha0 is definitional).
    const Interval m1 = lambda - lambda0;
    const Interval m2 = lambda0 - alpha0;
    Interval margin = min(m1, m2);
    bool proved = m1.provably_positive() && m2.provably_positive();
    bool refuted = m1.provably_nonpositive() || m2.provably_nonpositive();
    if (!start.alpha0_definitional) {
        const Interval m3 = alpha0 - lnd / Interval::point(start.N, prec);
        margin = min(margin, m3);
        proved = proved && m3.provably_nonnegative();
        refuted = refuted || m3.provably_negative();
    }
    ConditionRow c1a{"C1a",
                     proved    ? Verdict::proved
                     : refuted ? Verdict::refuted
                               : Verdict::undecided,
                     margin};

    const Interval lhs = mode == FormulaMode::compat
                             ? lnd
                             : start.iota.rounded_to(prec) * lnd;
    const Interval c1b_margin =
        lhs - exp(-(one + lambda0) / Interval::point(2, prec));

    ConditionReport rep;
    rep.rows.push_back(c1a);
    rep.rows.push_back(weak_row("C1b", c1b_margin));
    finish_report(rep);
    return rep;
}

ConditionReport check_conditions(const StartingConstants& start,
                                 const GeometryBounds& geom, const AuxChain& aux,
                                 FormulaMode mode) {
    const Precision p = aux.alpha.precision();
    const Interval one = Interval::point(1, p);

    ConditionReport rep = head_conditions(start, mode, p);
    rep.first_failing.reset();

    rep.rows.push_back(strict_row(
        "gamma1_in_range", min(aux.gamma1, aux.gamma1max - aux.gamma1)));
    rep.rows.push_back(
        strict_row("gamma2_in_range", min(aux.gamma2, one - aux.gamma)));
    rep.rows.push_back(strict_row("tau_positive", aux.tau));
    // The alpha denominator needs lambda - (1-gamma1)/tau0 > 0; C1a only
    // guarantees lambda - lambda0 > 0, so this is its own check.
    rep.rows.push_back(strict_row(
        "alpha_denom_positive",
        start.lambda.rounded_to(p) - (one - aux.gamma1) / aux.tau0));
    rep.rows.push_back(strict_row("alpha_positive", aux.alpha));
    rep.rows.push_back(strict_row("etatilde_below_one", one - aux.etatilde));
    rep.rows.push_back(strict_row("D3_positive", geom.D3.rounded_to(p)));
    rep.rows.push_back(strict_row(
        "C2", one - aux.tau0 * start.alpha0.rounded_to(p)));
    rep.rows.push_back(weak_row("C3", aux.gamma1 - aux.gamma1min));
    rep.rows.push_back(strict_row("C4", one - aux.eta));

    finish_report(rep);
    return rep;
}

Interval measure_bound(const Interval& eta, const Interval& omega_len) {
    const Precision p = eta.precision();
    const Interval one = Interval::point(1, p);
    if (!eta.provably_nonnegative() || !eta.provably_lt(one))
        throw InvalidEta("eta not provably inside [0,1)");
    if (!omega_len.provably_positive())
        throw InvalidInput("measure_bound needs |Omega| > 0");
    return (one - eta) * omega_len;
}

}  // namespace quadcert
