#pragma once

// Certified enclosures of base^(p/q) for rational base and exponent.
//
// With base = a/b and P fractional bits, R = floor(root_q(floor(a^p 2^(Pq) / b^p)))
// satisfies R^q b^p <= a^p 2^(Pq) < (R+1)^q b^p, so R/2^P <= base^(p/q) < (R+1)/2^P.
// Exact powers (a and b both perfect q-th powers) are returned exactly.

#include "rational.hpp"

#include <stdexcept>

namespace polarscale {

enum class Rounding { down, up };

namespace detail {

inline bool exact_root(const Integer& v, unsigned long q, Integer& root)
{
    return mpz_root(root.get_mpz_t(), v.get_mpz_t(), q) != 0;
}

inline Integer root_floor(const Integer& v, unsigned long q)
{
    Integer r;
    mpz_root(r.get_mpz_t(), v.get_mpz_t(), q);
    return r;
}

inline unsigned long to_ulong_checked(const Integer& v, const char* what)
{
    if (v < 0 || !v.fits_ulong_p())
        throw std::domain_error(std::string(what) + " out of range");
    return v.get_ui();
}

} // namespace detail

// Is base^(p/q) exactly rational? If so, store it.
inline bool exact_rational_power(const Rational& base, const Rational& exponent, Rational& out)
{
    if (base < 0)
        throw std::domain_error("rational_power_bound: negative base");
    Integer p = exponent.get_num();
    unsigned long q = detail::to_ulong_checked(exponent.get_den(), "exponent denominator");
    Integer a = base.get_num(), b = base.get_den();
    if (p == 0) {
        out = 1;
        return true;
    }
    if (a == 0) {
        if (p < 0)
            throw std::domain_error("rational_power_bound: zero base with negative exponent");
        out = 0;
        return true;
    }
    if (p < 0) {
        std::swap(a, b);
        p = -p;
    }
    unsigned long pe = detail::to_ulong_checked(p, "exponent numerator");
    Integer ra, rb;
    if (detail::exact_root(a, q, ra) && detail::exact_root(b, q, rb)) {
        out = make_rational(pow_int(ra, pe), pow_int(rb, pe));
        return true;
    }
    return false;
}

// Rational r with r >= base^exp (Rounding::up) or r <= base^exp (Rounding::down).
// The enclosure has width at most 2^-bits (relative to the integer part scale).
inline Rational rational_power_bound(const Rational& base, const Rational& exponent, Rounding dir,
                                     unsigned long bits = 128)
{
    Rational exact;
    if (exact_rational_power(base, exponent, exact))
        return exact;
    Integer p = exponent.get_num();
    unsigned long q = exponent.get_den().get_ui();
    Integer a = base.get_num(), b = base.get_den();
    if (p < 0) {
        std::swap(a, b);
        p = -p;
    }
    unsigned long pe = p.get_ui();
    Integer num = pow_int(a, pe) << (bits * q);
    Integer den = pow_int(b, pe);
    Integer r = detail::root_floor(floor_div(num, den), q);
    if (dir == Rounding::up)
        ++r;
    return make_rational(r, shifted_one(bits));
}

// Exact comparison of base^exp against a rational threshold: returns -1, 0, +1
// for base^(p/q) <, =, > value. Requires base >= 0 and value >= 0.
inline int compare_power(const Rational& base, const Rational& exponent, const Rational& value)
{
    if (base < 0 || value < 0)
        throw std::domain_error("compare_power: negative operand");
    Integer p = exponent.get_num();
    unsigned long q = detail::to_ulong_checked(exponent.get_den(), "exponent denominator");
    Integer a = base.get_num(), b = base.get_den();
    if (p < 0) {
        if (a == 0)
            throw std::domain_error("compare_power: zero base with negative exponent");
        std::swap(a, b);
        p = -p;
    }
    unsigned long pe = detail::to_ulong_checked(p, "exponent numerator");
    // (a/b)^(p/q) vs c/d  <=>  a^p d^q vs c^q b^p
    Integer lhs = pow_int(a, pe) * pow_int(value.get_den(), q);
    Integer rhs = pow_int(value.get_num(), q) * pow_int(b, pe);
    return cmp(lhs, rhs) < 0 ? -1 : (lhs == rhs ? 0 : 1);
}

} // namespace polarscale
