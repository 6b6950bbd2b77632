#include "quadcert/quadratic.hpp"

#include <algorithm>

namespace quadcert {

namespace {

Precision prec_of(const Interval& a) { return a.precision(); }

Precision max_prec(const Interval& a, const Interval& b) {
    return Precision(std::max(a.precision().bits, b.precision().bits));
}

void require_unit_open(const Interval& v, const char* name) {
    Precision p = prec_of(v);
    if (!v.provably_positive() || !v.provably_lt(Interval::point(1, p)))
        throw InvalidInput(std::string(name) + " must lie strictly inside (0,1)");
}

}  // namespace

Interval FamilyWindow::a_star() const {
    Precision p = eps.precision();
    return Interval::point(2, p) - eps;
}

Interval FamilyWindow::a_box() const {
    Precision p = eps.precision();
    return hull(a_star(), Interval::point(2, p));
}

FamilyWindow window_from_eps(const Interval& eps) {
    require_unit_open(eps, "eps");
    return FamilyWindow{eps};
}

FamilyWindow window_from_eps_exp(long eps_exp, Precision prec) {
    if (eps_exp < 1) throw InvalidInput("eps_exp must be >= 1");
    return FamilyWindow{Interval::pow10(-eps_exp, prec)};
}

std::pair<Interval, Interval> expansivity_constants(const Interval& delta,
                                                    const Interval& iota,
                                                    const FamilyWindow& window) {
    require_unit_open(delta, "delta");
    require_unit_open(iota, "iota");
    Precision p(std::max({delta.precision().bits, iota.precision().bits,
                          window.eps.precision().bits}));
    Interval d = delta.rounded_to(p);
    Interval i = iota.rounded_to(p);
    Interval eps = window.eps.rounded_to(p);
    Interval four = Interval::point(4, p);
    Interval two = Interval::point(2, p);

    Interval d2 = sqr(d);
    Interval c1 = sqrt((four - pow(d, two * i)) / (four - d2));

    // 4 - (delta^2 - a*)^2 rewritten as s(4 - s), s = delta^2 + eps.
    Interval s = d2 + eps;
    Interval radicand = s * (four - s);
    if (!radicand.provably_positive())
        throw DomainError("lambda radicand not provably positive "
                          "(delta too small relative to eps)");
    Interval lam = log(two * d * sqrt((four - d2) / radicand));
    return {c1, lam};
}

long escape_time_N(const FamilyWindow& window, Precision prec) {
    Interval eps = window.eps.rounded_to(prec);
    Interval one = Interval::point(1, prec);
    Interval three = Interval::point(3, prec);
    Interval u = eps * (three - eps);  // = 3 eps - eps^2 = 2 - a*^2 + a*
    if (!u.provably_positive() || !u.provably_lt(one))
        throw InvalidInput("escape_time_N needs 3*eps - eps^2 in (0,1)");
    Interval n = log(one / u) / log(Interval::point(4, prec));
    long N = floor_int(n);
    if (N < 1) throw InvalidInput("escape time N must be >= 1 (eps too large)");
    return N;
}

std::pair<Interval, Interval> base_rates(const Interval& delta, long N,
                                         const Interval& lambda,
                                         const Interval& s_lambda0) {
    if (N < 1) throw InvalidInput("base_rates needs N >= 1");
    require_unit_open(delta, "delta");
    Precision p = max_prec(delta, lambda);
    Interval one = Interval::point(1, p);
    Interval alpha0 = log(one / delta.rounded_to(p)) / Interval::point(N, p);
    Interval s = s_lambda0.rounded_to(p);
    Interval lambda0 = (one - s) * alpha0 + s * lambda.rounded_to(p);
    return {alpha0, lambda0};
}

std::pair<Interval, Interval> base_rates(const Interval& delta, long N,
                                         const Interval& lambda) {
    return base_rates(delta, N, lambda,
                      Interval::from_decimal("0.8", max_prec(delta, lambda)));
}

long contraction_horizon_N1(const Interval& delta, const Interval& iota, long N,
                            FormulaMode mode, Precision prec) {
    require_unit_open(delta, "delta");
    Interval d = delta.rounded_to(prec);
    Interval one = Interval::point(1, prec);
    Interval ln4 = log(Interval::point(4, prec));
    long raw;
    if (mode == FormulaMode::compat) {
        Interval num = one - pow(d, iota.rounded_to(prec));
        if (!num.provably_positive())
            throw InvalidInput("contraction_horizon_N1: 1 - delta^iota not positive");
        raw = floor_int(log(num / sqr(d)) / ln4);
    } else {
        raw = floor_int(log(one / (Interval::point(2, prec) * sqr(d))) / ln4);
    }
    long n1 = std::min(raw, N - 1);
    if (n1 < 1)
        throw InvalidInput("contraction horizon N1 below 1 (delta too large)");
    return n1;
}

std::pair<Interval, Interval> parameter_derivative_bounds(const Interval& lambda0,
                                                          long N) {
    if (N < 1) throw InvalidInput("parameter_derivative_bounds needs N >= 1");
    Precision p = lambda0.precision();
    Interval t = geometric_tail(lambda0, N, p);
    Interval half = Interval::from_decimal("0.5", p);
    Interval d2 = Interval::from_decimal("1.5", p) + t;
    Interval den = half - t;
    if (!den.provably_positive())
        throw NonResonanceFailure("D3 denominator 1/2 - tail not provably positive");
    return {d2, Interval::point(1, p) / den};
}

QuadraticSetup quadratic_setup(const Interval& delta, const Interval& iota,
                               const FamilyWindow& window, FormulaMode mode,
                               Precision prec, const Interval& s_lambda0) {
    Interval d = delta.rounded_to(prec);
    Interval i = iota.rounded_to(prec);
    FamilyWindow win{window.eps.rounded_to(prec)};
    require_unit_open(d, "delta");
    require_unit_open(i, "iota");
    require_unit_open(win.eps, "eps");
    if (!d.provably_lt(pow(d, i)))
        throw InvalidInput("delta^iota > delta failed: iota must be < 1");

    auto [c1, lam] = expansivity_constants(d, i, win);
    if (!lam.provably_positive())
        throw InvalidInput("lambda enclosure not provably positive");
    long N = escape_time_N(win, prec);
    auto [alpha0, lambda0] = base_rates(d, N, lam, s_lambda0.rounded_to(prec));
    long N1 = contraction_horizon_N1(d, i, N, mode, prec);
    auto [D2, D3] = parameter_derivative_bounds(lambda0, N);

    StartingConstants start;
    start.N = N;
    start.delta = d;
    start.iota = i;
    start.C1 = c1;
    start.lambda = lam;
    start.alpha0 = alpha0;
    start.lambda0 = lambda0;
    start.alpha0_definitional = true;

    GeometryBounds geom;
    geom.M1 = Interval::point(4, prec);
    geom.M2 = Interval::point(2, prec);
    geom.L1 = Interval::from_decimal("0.5", prec);
    geom.L2 = Interval::from_decimal("0.5", prec);
    geom.N1 = N1;
    geom.I_len = Interval::point(4, prec);
    geom.kappa = Interval::point(1, prec);
    geom.D2 = D2;
    geom.D3 = D3;
    geom.Ntilde = N;  // provisional until the orbit run confirms the escape

    return QuadraticSetup{win, start, geom};
}

QuadraticSetup quadratic_setup(const Interval& delta, const Interval& iota,
                               const FamilyWindow& window, FormulaMode mode,
                               Precision prec) {
    return quadratic_setup(delta, iota, window, mode, prec,
                           Interval::from_decimal("0.8", prec));
}

}  // namespace quadcert
