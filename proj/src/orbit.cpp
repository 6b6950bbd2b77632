#include "quadcert/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace quadcert {

namespace {

// Full-precision recursion state.  Traces store outward mirrors at a fixed
// narrow precision (plenty for the comparisons the verifiers make), while the
// recursion itself always runs at the caller's working precision — re-rounding
// the state each step would let the 4^n growth amplify the storage error.
constexpr long kTraceBits = 192;

struct Sequences {
    Interval c, dprod, csum, cprime;
};

Sequences initial(const Interval& a, Precision p) {
    Sequences s;
    s.c = -a;
    s.dprod = Interval::point(1, p);
    s.csum = Interval::point(1, p);
    s.cprime = Interval::point(-1, p);
    return s;
}

void advance(Sequences& s, const Interval& a, const Interval& one,
             const Interval& two, long n) {
    const Interval c_prev = s.c;
    s.dprod = s.dprod * (two * c_prev);
    if (s.dprod.contains_zero())
        throw PrecisionExhausted("derivative product contains 0 at step " +
                                 std::to_string(n));
    s.c = sqr(c_prev) - a;
    s.csum = s.csum + one / s.dprod;
    s.cprime = two * c_prev * s.cprime - one;
}

OrbitStep snapshot(long n, const Sequences& s) {
    const Precision t(kTraceBits);
    return OrbitStep{n, s.c.rounded_to(t), s.dprod.rounded_to(t),
                     s.csum.rounded_to(t), s.cprime.rounded_to(t)};
}

OrbitTrace run_trace(const Interval& a, long n_max, Precision prec,
                     bool width_capped) {
    if (n_max < 1) throw InvalidInput("orbit iteration needs n_max >= 1");
    const Interval one = Interval::point(1, prec);
    const Interval two = Interval::point(2, prec);

    OrbitTrace trace;
    trace.prec_bits = prec.bits;
    trace.steps.reserve(static_cast<std::size_t>(n_max) + 1);

    Sequences s = initial(a, prec);
    trace.steps.push_back(snapshot(0, s));
    for (long n = 1; n <= n_max; ++n) {
        advance(s, a, one, two, n);
        if (width_capped && n < n_max && s.c.width_upper() > 0.5)
            throw PrecisionExhausted("c_" + std::to_string(n) +
                                     " enclosure wider than 1/2");
        trace.steps.push_back(snapshot(n, s));
    }
    return trace;
}

}  // namespace

OrbitTrace iterate_critical(const FamilyWindow& window, long n_max,
                            Precision prec) {
    FamilyWindow win{window.eps.rounded_to(prec)};
    return run_trace(win.a_box(), n_max, prec, /*width_capped=*/true);
}

OrbitTrace iterate_at(const Interval& a, long n_max, Precision prec) {
    return run_trace(a.rounded_to(prec), n_max, prec, /*width_capped=*/false);
}

bool parder_identity_holds(const OrbitTrace& trace) {
    for (const OrbitStep& s : trace.steps) {
        if (!abs(s.cprime).intersects(abs(s.csum * s.dprod))) return false;
    }
    return true;
}

Interval verify_A3(const OrbitTrace& trace, const Interval& alpha0, long N) {
    if (N < 1) throw InvalidInput("verify_A3 needs N >= 1");
    if (static_cast<long>(trace.steps.size()) < N + 1)
        throw InvalidInput("trace shorter than N");
    const Interval decay = exp(-alpha0);
    Interval r = decay;  // e^{-alpha0 n}
    Interval margin = abs(trace.steps[1].c) - r;
    for (long n = 2; n <= N; ++n) {
        r = r * decay;
        margin = min(margin, abs(trace.steps[n].c) - r);
    }
    return margin;
}

EscapeResult find_Ntilde_escape(const FamilyWindow& window, const Interval& delta,
                                const Interval& iota, Precision prec,
                                long n_limit) {
    FamilyWindow win{window.eps.rounded_to(prec)};
    if (n_limit <= 0) n_limit = 2 * escape_time_N(win, prec);

    const Interval two = Interval::point(2, prec);
    const Interval quarter = Interval::from_decimal("0.25", prec);
    const Interval astar = win.a_star();

    EscapeResult result;
    Interval c = -astar;
    bool found = false;
    for (long n = 1; n <= n_limit; ++n) {
        c = sqr(c) - astar;
        const Interval d = abs(two - c);
        if (quarter.provably_le(d)) {
            result.ntilde = n;
            result.range_len = d;
            found = true;
            break;
        }
        if (c.width_upper() > 0.25)
            throw PrecisionExhausted("point orbit at a* lost certainty at step " +
                                     std::to_string(n));
    }
    if (!found) throw NotFound(n_limit);

    // (A2)'s other half over the whole box: no close return before the escape.
    const Interval dio = pow(delta.rounded_to(prec), iota.rounded_to(prec));
    const Interval abox = win.a_box();
    Interval bc = -abox;
    for (long m = 1; m <= result.ntilde; ++m) {
        bc = sqr(bc) - abox;
        if (!dio.provably_le(abs(bc)))
            throw PrecisionExhausted(
                "cannot certify |c_m| >= delta^iota over the box at m = " +
                std::to_string(m));
    }
    return result;
}

NonResonance verify_A4_nonresonance(const OrbitTrace& trace, long ntilde,
                                    const Interval& lambda0) {
    if (ntilde < 1) throw InvalidInput("verify_A4 needs ntilde >= 1");
    if (static_cast<long>(trace.steps.size()) < ntilde + 1)
        throw InvalidInput("trace shorter than ntilde");
    const Precision p(kTraceBits);
    const Interval one = Interval::point(1, p);

    Interval min_abs = abs(trace.steps[1].csum);
    Interval max_abs = min_abs;
    for (long k = 1; k <= ntilde; ++k) {
        const Interval& cs = trace.steps[k].csum;
        if (cs.contains_zero())
            throw UndecidedMargin(k, "csum_" + std::to_string(k) +
                                         " enclosure contains 0");
        const Interval a = abs(cs);
        min_abs = min(min_abs, a);
        max_abs = max(max_abs, a);
    }

    const Interval tail = geometric_tail(lambda0, ntilde, lambda0.precision());
    const Interval& cs_end = trace.steps[ntilde].csum;
    NonResonance nr;
    nr.a4_margin = one - abs(cs_end - one) - tail;
    nr.d2_direct = max(max_abs, abs(cs_end) + tail);
    const Interval d3inv = min(min_abs, nr.a4_margin);
    // A meaningful D3 needs the (F3) minimum provably positive; when the a4
    // margin itself fails, report the degenerate 0 and let the verdict speak.
    nr.d3_direct = d3inv.provably_positive() ? one / d3inv
                                             : Interval::point(0, p);
    return nr;
}

Verdict verify_N1(const FamilyWindow& window, const Interval& delta, long N1,
                  Precision prec) {
    if (N1 < 1) throw InvalidInput("verify_N1 needs N1 >= 1");
    FamilyWindow win{window.eps.rounded_to(prec)};
    const Interval d2 = sqr(delta.rounded_to(prec));
    const Interval one = Interval::point(1, prec);
    if (!d2.provably_lt(one)) throw InvalidInput("delta^2 must be below 1");

    const Interval abox = win.a_box();
    // Delta_0 = f((-delta, delta)) over the box = [-sup a, delta^2 - inf a].
    Interval X = hull(-abox, d2 - abox);
    bool all_far = one.provably_le(abs(X));
    for (long i = 1; i <= N1 && all_far; ++i) {
        X = sqr(X) - abox;
        all_far = one.provably_le(abs(X));
    }
    if (all_far) return Verdict::proved;

    // Certify a violation along the orbit of the endpoint delta^2 - 2 at
    // a = 2; if even that point provably keeps its distance, stay undecided.
    const Interval a2pt = Interval::point(2, prec);
    Interval x = d2 - a2pt;
    for (long j = 0; j <= N1; ++j) {
        if (abs(x).provably_lt(one)) return Verdict::refuted;
        x = sqr(x) - a2pt;
    }
    return Verdict::undecided;
}

bool OrbitVerdicts::all_proved() const {
    return a2 == Verdict::proved && a3 == Verdict::proved &&
           a4 == Verdict::proved && n1_ok == Verdict::proved;
}

OrbitVerdicts verify_orbit(const QuadraticSetup& setup, Precision prec) {
    const FamilyWindow& win = setup.window;
    const long N = setup.start.N;

    OrbitVerdicts out;
    out.prec_bits = prec.bits;

    try {
        EscapeResult esc =
            find_Ntilde_escape(win, setup.start.delta, setup.start.iota, prec);
        out.ntilde = esc.ntilde;
        out.range_len = esc.range_len;
    } catch (const NotFound&) {
        // no certified escape below the limit; (A2) stays undecided
    }
    const long nt_used = out.ntilde ? *out.ntilde : setup.geom.Ntilde;

    OrbitTrace trace = iterate_critical(win, std::max(N, nt_used), prec);
    if (!parder_identity_holds(trace))
        throw Error("parameter-derivative identity violated in the orbit trace");

    out.a3_margin = verify_A3(trace, setup.start.alpha0, N);
    out.a3 = out.a3_margin.provably_positive()      ? Verdict::proved
             : out.a3_margin.provably_nonpositive() ? Verdict::refuted
                                                    : Verdict::undecided;

    NonResonance nr = verify_A4_nonresonance(trace, nt_used, setup.start.lambda0);
    out.a4_margin = nr.a4_margin;
    out.d2_direct = nr.d2_direct;
    out.d3_direct = nr.d3_direct;
    out.a4 = out.a4_margin.provably_positive()      ? Verdict::proved
             : out.a4_margin.provably_nonpositive() ? Verdict::refuted
                                                    : Verdict::undecided;

    if (out.ntilde) {
        const Interval dio =
            pow(setup.start.delta.rounded_to(prec), setup.start.iota.rounded_to(prec));
        out.a2 = (*out.ntilde >= N && dio.provably_le(out.range_len))
                     ? Verdict::proved
                     : Verdict::undecided;
    }

    out.n1_ok = verify_N1(win, setup.start.delta, setup.geom.N1, prec);
    return out;
}

long orbit_precision_bits(long eps_exp) {
    const double bits_for_eps = std::ceil(eps_exp * 3.321928094887362);
    const long raw = static_cast<long>(std::ceil(bits_for_eps * 1.447));
    return std::max(256L, ((raw + 63) / 64) * 64);
}

}  // namespace quadcert
