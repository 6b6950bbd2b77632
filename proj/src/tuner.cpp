#include "quadcert/tuner.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cstdio>

namespace quadcert {

namespace {

bool hi_less(const Interval& a, const Interval& b) {
    return mpfr_cmp(a.hi_raw(), b.hi_raw()) < 0;
}

// Fractions move on a fixed 10^-6 lattice during descent so every trial stays
// an exact decimal literal and the walk is integer arithmetic end to end.
constexpr long kScale = 1000000;

long parse_scaled(const std::string& s) {
    std::size_t dot = s.find('.');
    if (dot == std::string::npos || s.find_first_not_of("0.", 0) == 0)
        throw InvalidInput("fraction '" + s + "' must look like 0.d[1-6 digits]");
    const std::string head = s.substr(0, dot);
    const std::string tail = s.substr(dot + 1);
    if ((!head.empty() && head != "0") || tail.empty() || tail.size() > 6 ||
        tail.find_first_not_of("0123456789") != std::string::npos)
        throw InvalidInput("fraction '" + s + "' must look like 0.d[1-6 digits]");
    long v = std::stol(tail) ;
    for (std::size_t i = tail.size(); i < 6; ++i) v *= 10;
    if (v < 1 || v >= kScale)
        throw InvalidInput("fraction '" + s + "' must lie strictly inside (0,1)");
    return v;
}

std::string format_scaled(long v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0.%06ld", v);
    return buf;
}

}  // namespace

QuadraticSetup setup_from_inputs(const CandidateInputs& in, FormulaMode mode,
                                 Precision prec) {
    const Interval delta = Interval::pow10(-in.delta_exp, prec);
    const Interval iota = Interval::from_decimal(in.iota, prec);
    const FamilyWindow win = window_from_eps_exp(in.eps_exp, prec);
    const Interval sl0 = Interval::from_decimal(in.s_lambda0, prec);
    return quadratic_setup(delta, iota, win, mode, prec, sl0);
}

std::size_t SearchSpace::grid_size() const {
    const std::size_t sizes[] = {delta_exp.size(), iota.size(),   eps_exp.size(),
                                 s_alpha1.size(),  s_gamma1.size(), s_gamma2.size(),
                                 s_lambda0.size()};
    std::size_t total = 1;
    for (std::size_t s : sizes) total *= s;
    return total;
}

CandidateInputs SearchSpace::at(std::size_t index) const {
    // Mixed-radix decode, last field fastest (plain odometer order).
    std::size_t rem = index;
    auto take = [&rem](std::size_t n) {
        std::size_t i = rem % n;
        rem /= n;
        return i;
    };
    const std::size_t i7 = take(s_lambda0.size());
    const std::size_t i6 = take(s_gamma2.size());
    const std::size_t i5 = take(s_gamma1.size());
    const std::size_t i4 = take(s_alpha1.size());
    const std::size_t i3 = take(eps_exp.size());
    const std::size_t i2 = take(iota.size());
    const std::size_t i1 = take(delta_exp.size());
    (void)i1;
    CandidateInputs in;
    in.delta_exp = delta_exp[i1];
    in.iota = iota[i2];
    in.eps_exp = eps_exp[i3];
    in.s_alpha1 = s_alpha1[i4];
    in.s_gamma1 = s_gamma1[i5];
    in.s_gamma2 = s_gamma2[i6];
    in.s_lambda0 = s_lambda0[i7];
    return in;
}

SearchSpace SearchSpace::single(const CandidateInputs& in) {
    SearchSpace s;
    s.delta_exp = {in.delta_exp};
    s.iota = {in.iota};
    s.eps_exp = {in.eps_exp};
    s.s_alpha1 = {in.s_alpha1};
    s.s_gamma1 = {in.s_gamma1};
    s.s_gamma2 = {in.s_gamma2};
    s.s_lambda0 = {in.s_lambda0};
    return s;
}

CandidateResult evaluate_candidate(const CandidateInputs& in, FormulaMode mode,
                                   Precision prec) {
    CandidateResult r;
    r.inputs = in;
    try {
        const QuadraticSetup setup = setup_from_inputs(in, mode, prec);
        const FreeChoices choices{Interval::from_decimal(in.s_alpha1, prec),
                                  Interval::from_decimal(in.s_gamma1, prec),
                                  Interval::from_decimal(in.s_gamma2, prec)};
        const AuxChain aux =
            evaluate_chain(setup.start, setup.geom, choices, mode, prec);
        r.report = check_conditions(setup.start, setup.geom, aux, mode);
        r.has_report = true;
        if (r.report.overall == Verdict::proved)
            r.eta = aux.eta;
        else
            r.failure = r.report.first_failing.value_or("unknown");
    } catch (const ChainSingularity& e) {
        r.failure = "singular:" + e.field;
    } catch (const NonResonanceFailure&) {
        r.failure = "nonresonance";
    } catch (const UndecidedMargin&) {
        r.failure = "undecided_sum";
    } catch (const AmbiguousFloor&) {
        r.failure = "ambiguous_floor";
    } catch (const PrecisionExhausted&) {
        r.failure = "precision_exhausted";
    } catch (const OverflowError&) {
        r.failure = "overflow";
    } catch (const DomainError&) {
        r.failure = "domain_error";
    } catch (const InvalidInput&) {
        r.failure = "invalid_input";
    } catch (const Error&) {
        r.failure = "error";
    }
    return r;
}

namespace {

struct Sweep {
    TuneResult result;
    long remaining = 0;

    void absorb(const CandidateResult& r) {
        ++result.evaluated;
        if (r.eta) {
            result.frontier.push_back(r);
            if (!result.best || hi_less(*r.eta, *result.best->eta))
                result.best = r;
        } else {
            ++result.failures[r.failure];
        }
    }
};

TuneResult tune_impl(const SearchSpace& space, long budget, FormulaMode mode,
                     Precision prec, TuneCost cost, bool parallel) {
    const std::size_t grid = space.grid_size();
    if (budget < 1 || grid == 0) throw EmptySpace();

    Sweep sweep;
    const long stage1 = std::min<long>(budget, static_cast<long>(grid));
    std::vector<CandidateResult> results(static_cast<std::size_t>(stage1));
#ifdef QUADCERT_HAVE_OPENMP
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < stage1; ++i)
            results[i] = evaluate_candidate(space.at(i), mode, prec);
    } else
#else
    (void)parallel;
#endif
    {
        for (long i = 0; i < stage1; ++i)
            results[i] = evaluate_candidate(space.at(i), mode, prec);
    }
    for (const CandidateResult& r : results) sweep.absorb(r);

    // Coordinate descent on the four fractions from the best grid point,
    // fields in declaration order, step halved after each sweep without an
    // accepted move.
    sweep.remaining = budget - stage1;
    if (sweep.result.best && sweep.remaining > 0) {
        CandidateInputs cur = sweep.result.best->inputs;
        long vals[4] = {parse_scaled(cur.s_alpha1), parse_scaled(cur.s_gamma1),
                        parse_scaled(cur.s_gamma2), parse_scaled(cur.s_lambda0)};
        long step = kScale / 20;  // 0.05
        while (step > 0 && sweep.remaining > 0) {
            bool improved = false;
            for (int f = 0; f < 4 && sweep.remaining > 0; ++f) {
                for (int dir : {+1, -1}) {
                    if (sweep.remaining <= 0) break;
                    const long moved =
                        std::clamp(vals[f] + dir * step, 1L, kScale - 1);
                    if (moved == vals[f]) continue;
                    CandidateInputs trial = cur;
                    const std::string text = format_scaled(moved);
                    (f == 0 ? trial.s_alpha1
                     : f == 1 ? trial.s_gamma1
                     : f == 2 ? trial.s_gamma2
                              : trial.s_lambda0) = text;
                    const CandidateResult r = evaluate_candidate(trial, mode, prec);
                    --sweep.remaining;
                    const bool accept =
                        r.eta && hi_less(*r.eta, *sweep.result.best->eta);
                    sweep.absorb(r);
                    if (accept) {
                        vals[f] = moved;
                        cur = trial;
                        improved = true;
                    }
                }
            }
            if (!improved) step /= 2;
        }
    }

    std::stable_sort(sweep.result.frontier.begin(), sweep.result.frontier.end(),
                     [](const CandidateResult& a, const CandidateResult& b) {
                         return hi_less(*a.eta, *b.eta);
                     });

    if (cost == TuneCost::certifying && sweep.result.best) {
        const CandidateInputs& w = sweep.result.best->inputs;
        const QuadraticSetup setup = setup_from_inputs(w, mode, prec);
        sweep.result.winner_orbit =
            verify_orbit(setup, Precision(orbit_precision_bits(w.eps_exp)));
    }
    return sweep.result;
}

}  // namespace

TuneResult tune(const SearchSpace& space, long budget, FormulaMode mode,
                Precision prec, TuneCost cost) {
    return tune_impl(space, budget, mode, prec, cost, /*parallel=*/true);
}

TuneResult tune_serial(const SearchSpace& space, long budget, FormulaMode mode,
                       Precision prec, TuneCost cost) {
    return tune_impl(space, budget, mode, prec, cost, /*parallel=*/false);
}

}  // namespace quadcert
