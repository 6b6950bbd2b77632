#include "quadcert/interval.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>

namespace quadcert {

namespace {

mpfr_prec_t prec_of(const mpfr_t x) { return mpfr_get_prec(x); }

mpfr_prec_t max_prec(const Interval& a, const Interval& b) {
    return std::max(prec_of(a.lo_raw()), prec_of(b.lo_raw()));
}

// Sign class of an interval: P (lo >= 0), N (hi <= 0), M (straddles 0).
enum class Sign { P, N, M };

Sign sign_of(const mpfr_t lo, const mpfr_t hi) {
    if (mpfr_sgn(lo) >= 0) return Sign::P;
    if (mpfr_sgn(hi) <= 0) return Sign::N;
    return Sign::M;
}

}  // namespace

std::pair<long, long> Precision::exponent_range() {
    return {static_cast<long>(mpfr_get_emin()), static_cast<long>(mpfr_get_emax())};
}

Interval::Interval() {
    mpfr_init2(lo_, 64);
    mpfr_init2(hi_, 64);
    mpfr_set_zero(lo_, 0);
    mpfr_set_zero(hi_, 0);
}

Interval::Interval(Precision p, int) {
    mpfr_init2(lo_, p.bits);
    mpfr_init2(hi_, p.bits);
}

Interval::Interval(const Interval& o) {
    mpfr_init2(lo_, prec_of(o.lo_));
    mpfr_init2(hi_, prec_of(o.hi_));
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept {
    mpfr_init2(lo_, 64);
    mpfr_init2(hi_, 64);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
}

Interval& Interval::operator=(const Interval& o) {
    if (this != &o) {
        mpfr_set_prec(lo_, prec_of(o.lo_));
        mpfr_set_prec(hi_, prec_of(o.hi_));
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    return *this;
}

Interval& Interval::operator=(Interval&& o) noexcept {
    if (this != &o) {
        mpfr_swap(lo_, o.lo_);
        mpfr_swap(hi_, o.hi_);
    }
    return *this;
}

Interval::~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Interval Interval::point(long v, Precision p) {
    Interval r(p, 0);
    mpfr_set_si(r.lo_, v, MPFR_RNDD);
    mpfr_set_si(r.hi_, v, MPFR_RNDU);
    return r;
}

Interval Interval::from_decimal(const std::string& s, Precision p) {
    Interval r(p, 0);
    if (mpfr_set_str(r.lo_, s.c_str(), 10, MPFR_RNDD) != 0)
        throw InvalidInput("unparseable decimal: '" + s + "'");
    mpfr_set_str(r.hi_, s.c_str(), 10, MPFR_RNDU);
    return r;
}

Interval Interval::from_decimal(const std::string& lo_s, const std::string& hi_s,
                                Precision p) {
    Interval r(p, 0);
    if (mpfr_set_str(r.lo_, lo_s.c_str(), 10, MPFR_RNDD) != 0)
        throw InvalidInput("unparseable decimal: '" + lo_s + "'");
    if (mpfr_set_str(r.hi_, hi_s.c_str(), 10, MPFR_RNDU) != 0)
        throw InvalidInput("unparseable decimal: '" + hi_s + "'");
    if (mpfr_cmp(r.lo_, r.hi_) > 0)
        throw InvalidInput("interval endpoints out of order");
    return r;
}

Interval Interval::pow10(long e, Precision p) {
    return from_decimal("1e" + std::to_string(e), p);
}

Interval Interval::make(const mpfr_t lo, const mpfr_t hi, Precision p) {
    Interval r(p, 0);
    mpfr_set(r.lo_, lo, MPFR_RNDD);
    mpfr_set(r.hi_, hi, MPFR_RNDU);
    if (mpfr_cmp(r.lo_, r.hi_) > 0)
        throw InvalidInput("interval endpoints out of order");
    return r;
}

Precision Interval::precision() const { return Precision(prec_of(lo_)); }
bool Interval::is_point() const { return mpfr_equal_p(lo_, hi_); }
bool Interval::contains_zero() const {
    return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}
bool Interval::contains(const Interval& inner) const {
    return mpfr_cmp(lo_, inner.lo_) <= 0 && mpfr_cmp(inner.hi_, hi_) <= 0;
}
bool Interval::intersects(const Interval& o) const {
    return !(mpfr_cmp(hi_, o.lo_) < 0 || mpfr_cmp(o.hi_, lo_) < 0);
}
bool Interval::provably_positive() const { return mpfr_sgn(lo_) > 0; }
bool Interval::provably_nonnegative() const { return mpfr_sgn(lo_) >= 0; }
bool Interval::provably_negative() const { return mpfr_sgn(hi_) < 0; }
bool Interval::provably_nonpositive() const { return mpfr_sgn(hi_) <= 0; }
bool Interval::provably_lt(const Interval& o) const {
    return mpfr_cmp(hi_, o.lo_) < 0;
}
bool Interval::provably_le(const Interval& o) const {
    return mpfr_cmp(hi_, o.lo_) <= 0;
}

namespace {

std::string format_endpoint(const mpfr_t v, mpfr_rnd_t rnd) {
    if (mpfr_nan_p(v)) return "nan";
    if (mpfr_inf_p(v)) return mpfr_sgn(v) > 0 ? "inf" : "-inf";
    if (mpfr_zero_p(v)) return "0";
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 10, 0, v, rnd);
    std::string digits(s);
    mpfr_free_str(s);
    std::string sign;
    if (digits[0] == '-') {
        sign = "-";
        digits.erase(0, 1);
    }
    std::string out = sign + digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    out += "e" + std::to_string(static_cast<long>(e) - 1);
    return out;
}

}  // namespace

std::string Interval::lo_string() const { return format_endpoint(lo_, MPFR_RNDD); }
std::string Interval::hi_string() const { return format_endpoint(hi_, MPFR_RNDU); }

double Interval::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Interval::width_upper() const {
    mpfr_t w;
    mpfr_init2(w, prec_of(lo_));
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
}

Interval Interval::rounded_to(Precision p) const {
    Interval r(p, 0);
    mpfr_set(r.lo_, lo_, MPFR_RNDD);
    mpfr_set(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval operator+(const Interval& a, const Interval& b) {
    Interval r(Precision(max_prec(a, b)), 0);
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval operator-(const Interval& a, const Interval& b) {
    Interval r(Precision(max_prec(a, b)), 0);
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
}

Interval operator-(const Interval& a) {
    Interval r(a.precision(), 0);
    mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
    return r;
}

Interval operator*(const Interval& a, const Interval& b) {
    Interval r(Precision(max_prec(a, b)), 0);
    const Sign sa = sign_of(a.lo_, a.hi_), sb = sign_of(b.lo_, b.hi_);
    // Moore's table; M*M needs two candidates per endpoint.
    auto mul = [&](mpfr_ptr dst, const mpfr_t x, const mpfr_t y, mpfr_rnd_t rnd) {
        mpfr_mul(dst, x, y, rnd);
    };
    if (sa == Sign::M && sb == Sign::M) {
        mpfr_t t;
        mpfr_init2(t, prec_of(r.lo_));
        mul(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
        mul(t, a.hi_, b.lo_, MPFR_RNDD);
        if (mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
        mul(r.hi_, a.lo_, b.lo_, MPFR_RNDU);
        mul(t, a.hi_, b.hi_, MPFR_RNDU);
        if (mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
        mpfr_clear(t);
        return r;
    }
    const mpfr_t *plo = nullptr, *phi = nullptr, *qlo = nullptr, *qhi = nullptr;
    if (sa == Sign::P && sb == Sign::P) { plo = &a.lo_; qlo = &b.lo_; phi = &a.hi_; qhi = &b.hi_; }
    else if (sa == Sign::P && sb == Sign::M) { plo = &a.hi_; qlo = &b.lo_; phi = &a.hi_; qhi = &b.hi_; }
    else if (sa == Sign::P && sb == Sign::N) { plo = &a.hi_; qlo = &b.lo_; phi = &a.lo_; qhi = &b.hi_; }
    else if (sa == Sign::M && sb == Sign::P) { plo = &a.lo_; qlo = &b.hi_; phi = &a.hi_; qhi = &b.hi_; }
    else if (sa == Sign::M && sb == Sign::N) { plo = &a.hi_; qlo = &b.lo_; phi = &a.lo_; qhi = &b.lo_; }
    else if (sa == Sign::N && sb == Sign::P) { plo = &a.lo_; qlo = &b.hi_; phi = &a.hi_; qhi = &b.lo_; }
    else if (sa == Sign::N && sb == Sign::M) { plo = &a.lo_; qlo = &b.hi_; phi = &a.lo_; qhi = &b.lo_; }
    else { plo = &a.hi_; qlo = &b.hi_; phi = &a.lo_; qhi = &b.lo_; }  // N*N
    mul(r.lo_, *plo, *qlo, MPFR_RNDD);
    mul(r.hi_, *phi, *qhi, MPFR_RNDU);
    return r;
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw DivisionByZeroInterval();
    Interval r(Precision(max_prec(a, b)), 0);
    const Sign sa = sign_of(a.lo_, a.hi_);
    const bool bp = mpfr_sgn(b.lo_) > 0;
    const mpfr_t *nlo, *dlo, *nhi, *dhi;
    if (bp) {
        if (sa == Sign::P)      { nlo = &a.lo_; dlo = &b.hi_; nhi = &a.hi_; dhi = &b.lo_; }
        else if (sa == Sign::N) { nlo = &a.lo_; dlo = &b.lo_; nhi = &a.hi_; dhi = &b.hi_; }
        else                    { nlo = &a.lo_; dlo = &b.lo_; nhi = &a.hi_; dhi = &b.lo_; }
    } else {
        if (sa == Sign::P)      { nlo = &a.hi_; dlo = &b.hi_; nhi = &a.lo_; dhi = &b.lo_; }
        else if (sa == Sign::N) { nlo = &a.hi_; dlo = &b.lo_; nhi = &a.lo_; dhi = &b.hi_; }
        else                    { nlo = &a.hi_; dlo = &b.hi_; nhi = &a.lo_; dhi = &b.hi_; }
    }
    mpfr_div(r.lo_, *nlo, *dlo, MPFR_RNDD);
    mpfr_div(r.hi_, *nhi, *dhi, MPFR_RNDU);
    return r;
}

Interval sqr(const Interval& a) {
    Interval r(a.precision(), 0);
    const Sign s = sign_of(a.lo_, a.hi_);
    if (s == Sign::P) {
        mpfr_sqr(r.lo_, a.lo_, MPFR_RNDD);
        mpfr_sqr(r.hi_, a.hi_, MPFR_RNDU);
    } else if (s == Sign::N) {
        mpfr_sqr(r.lo_, a.hi_, MPFR_RNDD);
        mpfr_sqr(r.hi_, a.lo_, MPFR_RNDU);
    } else {
        mpfr_set_zero(r.lo_, 0);
        mpfr_t t;
        mpfr_init2(t, prec_of(r.hi_));
        mpfr_sqr(r.hi_, a.lo_, MPFR_RNDU);
        mpfr_sqr(t, a.hi_, MPFR_RNDU);
        if (mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
        mpfr_clear(t);
    }
    return r;
}

Interval abs(const Interval& a) {
    Interval r(a.precision(), 0);
    const Sign s = sign_of(a.lo_, a.hi_);
    if (s == Sign::P) return a;
    if (s == Sign::N) return -a;
    mpfr_set_zero(r.lo_, 0);
    mpfr_t t;
    mpfr_init2(t, prec_of(r.hi_));
    mpfr_neg(t, a.lo_, MPFR_RNDU);
    if (mpfr_cmp(t, a.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
    else mpfr_set(r.hi_, a.hi_, MPFR_RNDU);
    mpfr_clear(t);
    return r;
}

Interval exp(const Interval& a) {
    Interval r(a.precision(), 0);
    mpfr_exp(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, a.hi_, MPFR_RNDU);
    return r;
}

Interval log(const Interval& a) {
    if (mpfr_sgn(a.lo_raw()) <= 0)
        throw DomainError("log: argument not provably positive");
    Interval r(a.precision(), 0);
    mpfr_log(r.lo_, a.lo_raw(), MPFR_RNDD);
    mpfr_log(r.hi_, a.hi_raw(), MPFR_RNDU);
    return r;
}

Interval sqrt(const Interval& a) {
    if (mpfr_sgn(a.lo_raw()) < 0)
        throw DomainError("sqrt: argument not provably nonnegative");
    Interval r(a.precision(), 0);
    mpfr_sqrt(r.lo_, a.lo_raw(), MPFR_RNDD);
    mpfr_sqrt(r.hi_, a.hi_raw(), MPFR_RNDU);
    return r;
}

Interval pow(const Interval& x, const Interval& y) {
    return exp(y * log(x));
}

Interval pow_int(const Interval& x, long k) {
    if (k == 0) return Interval::point(1, x.precision());
    if (k < 0) return Interval::point(1, x.precision()) / pow_int(x, -k);
    Interval r(x.precision(), 0);
    const Sign s = sign_of(x.lo_raw(), x.hi_raw());
    const bool even = (k % 2 == 0);
    const unsigned long uk = static_cast<unsigned long>(k);
    if (s == Sign::P || !even) {
        // odd k preserves order for any sign; even k with P is increasing
        mpfr_pow_ui(r.lo_, x.lo_raw(), uk, MPFR_RNDD);
        mpfr_pow_ui(r.hi_, x.hi_raw(), uk, MPFR_RNDU);
        return r;
    }
    if (s == Sign::N) {  // even power of a negative interval: decreasing
        mpfr_pow_ui(r.lo_, x.hi_raw(), uk, MPFR_RNDD);
        mpfr_pow_ui(r.hi_, x.lo_raw(), uk, MPFR_RNDU);
        return r;
    }
    // straddling 0, even power
    mpfr_set_zero(r.lo_, 0);
    mpfr_t t;
    mpfr_init2(t, mpfr_get_prec(r.hi_));
    mpfr_pow_ui(r.hi_, x.lo_raw(), uk, MPFR_RNDU);
    mpfr_pow_ui(t, x.hi_raw(), uk, MPFR_RNDU);
    if (mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
    mpfr_clear(t);
    return r;
}

Interval min(const Interval& a, const Interval& b) {
    Interval r(Precision(max_prec(a, b)), 0);
    mpfr_set(r.lo_, mpfr_cmp(a.lo_, b.lo_) <= 0 ? a.lo_ : b.lo_, MPFR_RNDD);
    mpfr_set(r.hi_, mpfr_cmp(a.hi_, b.hi_) <= 0 ? a.hi_ : b.hi_, MPFR_RNDU);
    return r;
}

Interval max(const Interval& a, const Interval& b) {
    Interval r(Precision(max_prec(a, b)), 0);
    mpfr_set(r.lo_, mpfr_cmp(a.lo_, b.lo_) >= 0 ? a.lo_ : b.lo_, MPFR_RNDD);
    mpfr_set(r.hi_, mpfr_cmp(a.hi_, b.hi_) >= 0 ? a.hi_ : b.hi_, MPFR_RNDU);
    return r;
}

Interval hull(const Interval& a, const Interval& b) {
    Interval r(Precision(max_prec(a, b)), 0);
    mpfr_set(r.lo_, mpfr_cmp(a.lo_, b.lo_) <= 0 ? a.lo_ : b.lo_, MPFR_RNDD);
    mpfr_set(r.hi_, mpfr_cmp(a.hi_, b.hi_) >= 0 ? a.hi_ : b.hi_, MPFR_RNDU);
    return r;
}

Interval intersect(const Interval& a, const Interval& b) {
    if (!a.intersects(b)) throw Error("empty interval intersection");
    Interval r(Precision(max_prec(a, b)), 0);
    mpfr_set(r.lo_, mpfr_cmp(a.lo_, b.lo_) >= 0 ? a.lo_ : b.lo_, MPFR_RNDD);
    mpfr_set(r.hi_, mpfr_cmp(a.hi_, b.hi_) <= 0 ? a.hi_ : b.hi_, MPFR_RNDU);
    return r;
}

long floor_int(const Interval& a) {
    mpfr_t fl, fh;
    mpfr_init2(fl, std::max<mpfr_prec_t>(64, mpfr_get_prec(a.lo_raw())));
    mpfr_init2(fh, std::max<mpfr_prec_t>(64, mpfr_get_prec(a.hi_raw())));
    mpfr_floor(fl, a.lo_raw());
    mpfr_floor(fh, a.hi_raw());
    const bool same = mpfr_equal_p(fl, fh);
    const bool fits = mpfr_fits_slong_p(fl, MPFR_RNDD);
    long v = fits ? mpfr_get_si(fl, MPFR_RNDD) : 0;
    mpfr_clear(fl);
    mpfr_clear(fh);
    if (!same)
        throw AmbiguousFloor("floor differs between endpoints; raise precision");
    if (!fits) throw OverflowError("floor_int: value outside long range");
    return v;
}

}  // namespace quadcert
