#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quadcert/orbit.hpp"

namespace quadcert {

// One configuration of the free inputs.  Fractions are decimal literals with
// at most six decimal places; they are parsed outward at evaluation precision,
// so a candidate is defined by text, not by any binary rounding of it.
struct CandidateInputs {
    long delta_exp = 0;  // delta = 10^-delta_exp
    std::string iota;
    long eps_exp = 0;    // eps = 10^-eps_exp
    std::string s_alpha1, s_gamma1, s_gamma2, s_lambda0;
};

struct SearchSpace {
    std::vector<long> delta_exp;
    std::vector<std::string> iota;
    std::vector<long> eps_exp;
    std::vector<std::string> s_alpha1, s_gamma1, s_gamma2, s_lambda0;

    std::size_t grid_size() const;
    // The lexicographic index -> candidate map that fixes iteration order
    // (fields in declaration order, values in listed order).
    CandidateInputs at(std::size_t index) const;
    static SearchSpace single(const CandidateInputs& in);
};

struct CandidateResult {
    CandidateInputs inputs;
    std::optional<Interval> eta;  // set iff every condition proved
    std::string failure;          // first failing condition or an error tag
    ConditionReport report;
    bool has_report = false;
};

enum class TuneCost { fast, certifying };

struct TuneResult {
    std::optional<CandidateResult> best;
    std::vector<CandidateResult> frontier;  // proved candidates by eta.hi
    long evaluated = 0;
    std::map<std::string, long> failures;   // histogram over failure labels
    std::optional<OrbitVerdicts> winner_orbit;  // certifying runs only
};

// delta/iota/eps/s_lambda0 of a candidate turned into a QuadraticSetup.
QuadraticSetup setup_from_inputs(const CandidateInputs& in, FormulaMode mode,
                                 Precision prec);

// quadratic_setup -> evaluate_chain -> check_conditions, with every library
// error caught and folded into the failure label.
CandidateResult evaluate_candidate(const CandidateInputs& in, FormulaMode mode,
                                   Precision prec);

// Exhaustive sweep of the grid (lexicographic, budget-capped), then
// coordinate descent on the four fractions from the best grid point with
// per-sweep step halving.  Deterministic by construction.
TuneResult tune(const SearchSpace& space, long budget, FormulaMode mode,
                Precision prec, TuneCost cost = TuneCost::fast);

// Serial twin of tune(); reference implementation for tests and the
// benchmark.  Must produce identical results.
TuneResult tune_serial(const SearchSpace& space, long budget, FormulaMode mode,
                       Precision prec, TuneCost cost = TuneCost::fast);

}  // namespace quadcert
