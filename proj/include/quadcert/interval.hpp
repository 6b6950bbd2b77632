#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "quadcert/errors.hpp"

namespace quadcert {

// Significand width for directed-rounded arithmetic.  The exponent range is
// the backend's default (|exp| < 2^30), which is never narrowed and leaves
// orders of magnitude of headroom over anything the library forms, such as
// squares of 10^-4990-scale quantities.
struct Precision {
    long bits;

    explicit Precision(long b) : bits(b) {
        if (b < 64) throw InvalidInput("Precision.bits must be >= 64");
    }
    static std::pair<long, long> exponent_range();

    Precision doubled() const { return Precision(bits * 2); }
    bool operator==(const Precision&) const = default;
};

// A closed enclosure [lo, hi] of a real number (or of a set of reals), with
// every operation rounding lo toward -inf and hi toward +inf so containment is
// never lost.  Values are immutable after construction; all operations are
// pure and thread-safe.
class Interval {
  public:
    Interval();                                   // [0, 0] at 64 bits
    Interval(const Interval& o);
    Interval(Interval&& o) noexcept;
    Interval& operator=(const Interval& o);
    Interval& operator=(Interval&& o) noexcept;
    ~Interval();

    // Exact point interval (small integers are representable at any precision).
    static Interval point(long v, Precision p);
    // Outward enclosure of a decimal string ("0.8", "1.5e-10", ...).
    static Interval from_decimal(const std::string& s, Precision p);
    // Outward enclosure [lo_str, hi_str].
    static Interval from_decimal(const std::string& lo_s, const std::string& hi_s,
                                 Precision p);
    // Outward enclosure of 10^e (exact for e >= 0 at sufficient precision).
    static Interval pow10(long e, Precision p);
    // Assemble from raw endpoint values (rounded outward to p).
    static Interval make(const mpfr_t lo, const mpfr_t hi, Precision p);

    Precision precision() const;
    bool is_point() const;
    bool contains_zero() const;
    bool contains(const Interval& inner) const;   // *this superset of inner
    bool intersects(const Interval& o) const;
    // Sign certificates for tri-state logic.
    bool provably_positive() const;               // lo > 0
    bool provably_nonnegative() const;            // lo >= 0
    bool provably_negative() const;               // hi < 0
    bool provably_nonpositive() const;            // hi <= 0
    // Certified numeric comparisons.
    bool provably_lt(const Interval& o) const;    // hi < o.lo
    bool provably_le(const Interval& o) const;    // hi <= o.lo

    // Decimal-scientific endpoint strings: lo printed rounding down, hi
    // rounding up, with enough digits that a round-to-nearest re-read at the
    // same precision recovers the endpoint exactly.
    std::string lo_string() const;
    std::string hi_string() const;

    double lo_double() const;                     // rounded down
    double hi_double() const;                     // rounded up
    double width_upper() const;                   // upper bound on hi - lo

    // Outward re-rounding to a (typically smaller) precision.
    Interval rounded_to(Precision p) const;

    const mpfr_t& lo_raw() const { return lo_; }
    const mpfr_t& hi_raw() const { return hi_; }

  private:
    Interval(Precision p, int /*tag*/);           // uninitialized-value ctor
    mpfr_t lo_, hi_;

    friend Interval operator+(const Interval&, const Interval&);
    friend Interval operator-(const Interval&, const Interval&);
    friend Interval operator*(const Interval&, const Interval&);
    friend Interval operator/(const Interval&, const Interval&);
    friend Interval operator-(const Interval&);
    friend Interval sqr(const Interval&);
    friend Interval abs(const Interval&);
    friend Interval exp(const Interval&);
    friend Interval log(const Interval&);
    friend Interval sqrt(const Interval&);
    friend Interval pow_int(const Interval&, long);
    friend Interval min(const Interval&, const Interval&);
    friend Interval max(const Interval&, const Interval&);
    friend Interval hull(const Interval&, const Interval&);
    friend Interval intersect(const Interval&, const Interval&);
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);   // 0 not in b
Interval operator-(const Interval& a);

Interval sqr(const Interval& a);                  // tight x^2 (not a * a)
Interval abs(const Interval& a);
Interval exp(const Interval& a);
Interval log(const Interval& a);                  // requires lo > 0
Interval sqrt(const Interval& a);                 // requires lo >= 0
Interval pow(const Interval& x, const Interval& y);  // exp(y log x), x.lo > 0
Interval pow_int(const Interval& x, long k);      // repeated-squaring tightness
Interval min(const Interval& a, const Interval& b);
Interval max(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);
Interval intersect(const Interval& a, const Interval& b);   // throws if empty

// The unique integer floor of the enclosure; AmbiguousFloor if floor(lo) !=
// floor(hi).
long floor_int(const Interval& a);

}  // namespace quadcert
