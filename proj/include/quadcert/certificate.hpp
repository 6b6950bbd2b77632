#pragma once

#include <optional>
#include <string>

#include "quadcert/tuner.hpp"

namespace quadcert {

// Everything a run needs besides the subcommand itself.  Mirrors the CLI
// flags one to one; the CLI layer only fills this in.
struct RunConfig {
    long delta_exp = 1000;
    std::string iota = "0.8";
    long eps_exp = 4990;
    std::string s_alpha1 = "0.8";
    std::string s_gamma1 = "0.85";
    std::string s_gamma2 = "0.8";
    std::string s_lambda0 = "0.8";
    FormulaMode mode = FormulaMode::compat;
    long chain_bits = 256;
    long orbit_bits = 0;          // 0: auto from eps_exp
    bool pinned_precision = false;  // user fixed the bits; no auto-retry
    int max_retries = 3;

    CandidateInputs inputs() const;
    long effective_orbit_bits() const;
};

// derive + check bundle: setup, chain and condition report.  When the chain
// cannot be evaluated (degenerate inputs), chain_ok is false and the report
// holds only the head conditions (C1a/C1b) so the verdict is still honest.
struct CheckOutcome {
    QuadraticSetup setup;
    AuxChain aux;
    ConditionReport report;
    Interval alpha1_tau1;  // reference-sheet extra rows
    Interval nr;
    long prec_bits = 0;
    bool chain_ok = true;
    std::string chain_error;
};

CheckOutcome run_check(const RunConfig& cfg);

// Setup only (no chain): what `derive` prints.
struct DeriveOutcome {
    QuadraticSetup setup;
    long prec_bits = 0;
};

DeriveOutcome run_derive(const RunConfig& cfg);

struct CertifyOutcome {
    CheckOutcome check;
    OrbitVerdicts orbit;
    std::string verdict;  // "certified" | "failed" | "undecided"
    std::optional<Interval> bound;  // present iff certified
};

CertifyOutcome run_certify(const RunConfig& cfg);

// JSON emitters.  All real values are {lo, hi} decimal-scientific strings;
// output is deterministic and carries no timestamps or host data.
std::string derive_json(const DeriveOutcome& out, const RunConfig& cfg);
std::string check_json(const CheckOutcome& out, const RunConfig& cfg);
std::string certificate_json(const CertifyOutcome& out, const RunConfig& cfg);
std::string tune_json(const TuneResult& result, FormulaMode mode, long budget,
                      long prec_bits, std::size_t frontier_cap = 100);
std::string orbit_json(const OrbitVerdicts& verdicts, const RunConfig& cfg);

// Plain-text renderings (the 15-digit table style of the reference sheet).
// report_text works on any document the emitters above produce.
std::string check_text(const CheckOutcome& out, const RunConfig& cfg);
std::string report_text(const std::string& document_json_text);

}  // namespace quadcert
