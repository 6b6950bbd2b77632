#pragma once

#include <stdexcept>
#include <string>

namespace quadcert {

// Every failure mode the library can signal.  All carry a message; a few carry
// the offending quantity's name so drivers can report which step broke.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidInput : Error {
    explicit InvalidInput(const std::string& what) : Error(what) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(what) {}
};

struct DivisionByZeroInterval : Error {
    DivisionByZeroInterval() : Error("interval division: denominator contains 0") {}
};

struct OverflowError : Error {
    explicit OverflowError(const std::string& what) : Error(what) {}
};

// A floor landed across an integer boundary: the enclosure is too wide to pick
// the unique value.  Callers retry at higher precision, never guess.
struct AmbiguousFloor : Error {
    explicit AmbiguousFloor(const std::string& what) : Error(what) {}
};

// An enclosure grew past the point of carrying information.
struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& what) : Error(what) {}
};

// A chain denominator contains 0; `field` names the constant being computed.
struct ChainSingularity : Error {
    std::string field;
    explicit ChainSingularity(const std::string& f)
        : Error("chain singularity: denominator contains 0 in " + f), field(f) {}
};

struct NonResonanceFailure : Error {
    explicit NonResonanceFailure(const std::string& what) : Error(what) {}
};

// A non-resonance sum enclosure contains 0 at index k (k = -1 marks the tail
// inequality).  Retry at higher precision.
struct UndecidedMargin : Error {
    long k;
    UndecidedMargin(long k_, const std::string& what) : Error(what), k(k_) {}
};

struct InvalidEta : Error {
    explicit InvalidEta(const std::string& what) : Error(what) {}
};

struct NotFound : Error {
    long limit;
    explicit NotFound(long n_limit)
        : Error("no qualifying index below limit " + std::to_string(n_limit)),
          limit(n_limit) {}
};

struct EmptySpace : Error {
    EmptySpace() : Error("search space is empty or budget < 1") {}
};

}  // namespace quadcert
