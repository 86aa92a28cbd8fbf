#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace polarscale {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den)
{
    if (den == 0)
        throw std::domain_error("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational make_rational(long num, long den = 1)
{
    return make_rational(Integer(num), Integer(den));
}

inline Integer pow_int(const Integer& base, unsigned long e)
{
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rational pow_rat(const Rational& base, unsigned long e)
{
    return make_rational(pow_int(base.get_num(), e), pow_int(base.get_den(), e));
}

inline Integer floor_div(const Integer& a, const Integer& b)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Integer ceil_div(const Integer& a, const Integer& b)
{
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Integer isqrt_floor(const Integer& a)
{
    if (a < 0)
        throw std::domain_error("square root of a negative integer");
    Integer r;
    mpz_sqrt(r.get_mpz_t(), a.get_mpz_t());
    return r;
}

inline Integer isqrt_ceil(const Integer& a)
{
    Integer r = isqrt_floor(a);
    if (r * r != a)
        ++r;
    return r;
}

inline Integer shifted_one(unsigned long bits)
{
    Integer r = 1;
    r <<= bits;
    return r;
}

// Dyadic rounding with 'bits' fractional bits.
inline Rational round_down_dyadic(const Rational& q, unsigned long bits)
{
    Integer scale = shifted_one(bits);
    return make_rational(floor_div(q.get_num() * scale, q.get_den()), scale);
}

inline Rational round_up_dyadic(const Rational& q, unsigned long bits)
{
    Integer scale = shifted_one(bits);
    return make_rational(ceil_div(q.get_num() * scale, q.get_den()), scale);
}

inline Rational from_double_exact(double v)
{
    Rational q(v);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Integer& v)
{
    return v.get_str();
}

inline std::string to_string(const Rational& q)
{
    if (q.get_den() == 1)
        return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Nearest double (mpq_get_d truncates).
inline double to_double(const Rational& q)
{
    mpfr_t t;
    mpfr_init2(t, 53);
    mpfr_set_q(t, q.get_mpq_t(), MPFR_RNDN);
    double d = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clear(t);
    return d;
}

// Decimal rendering with a fixed number of significant digits (no binary rounding detour).
inline std::string to_decimal(const Rational& q, int digits = 17);

namespace detail {

inline bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (c < '0' || c > '9')
            return false;
    return true;
}

inline Integer parse_integer(std::string_view s)
{
    bool neg = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s))
        throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    Integer v(std::string(s), 10);
    return neg ? Integer(-v) : v;
}

} // namespace detail

struct ParsedRational {
    Rational value;
    bool from_decimal = false; // true if the text was a decimal literal snapped to a fraction
};

// Accepts "p/q", "p", or a decimal literal such as "0.78" or "1e-4".
// Decimal literals are converted to the exact decimal fraction they denote.
inline ParsedRational parse_rational(std::string_view text)
{
    std::string_view s = text;
    while (!s.empty() && s.front() == ' ')
        s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ')
        s.remove_suffix(1);
    if (s.empty())
        throw std::invalid_argument("empty rational");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        Integer num = detail::parse_integer(s.substr(0, slash));
        Integer den = detail::parse_integer(s.substr(slash + 1));
        if (den == 0)
            throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        return {make_rational(num, den), false};
    }

    bool neg = false;
    if (s.front() == '-' || s.front() == '+') {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        exp10 = std::stol(std::string(detail::parse_integer(s.substr(e + 1)).get_str()));
        s = s.substr(0, e);
    }
    std::string digits;
    bool decimal = exp10 != 0;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if ((ip.empty() && fp.empty()) || (!ip.empty() && !detail::all_digits(ip)) ||
            (!fp.empty() && !detail::all_digits(fp)))
            throw std::invalid_argument("not a number: '" + std::string(text) + "'");
        digits = std::string(ip) + std::string(fp);
        exp10 -= static_cast<long>(fp.size());
        decimal = true;
    } else {
        if (!detail::all_digits(s))
            throw std::invalid_argument("not a number: '" + std::string(text) + "'");
        digits = std::string(s);
    }
    Integer mant(digits, 10);
    if (neg)
        mant = -mant;
    Integer ten = 10;
    Rational v = exp10 >= 0 ? make_rational(mant * pow_int(ten, exp10), 1)
                            : make_rational(mant, pow_int(ten, -exp10));
    return {v, decimal};
}

inline std::string to_decimal(const Rational& q, int digits)
{
    if (q == 0)
        return "0";
    mpf_class f(q, 64 + static_cast<mp_bitcnt_t>(digits) * 4);
    mp_exp_t e;
    std::string m = f.get_str(e, 10, digits);
    bool neg = !m.empty() && m.front() == '-';
    if (neg)
        m.erase(0, 1);
    std::string out;
    if (e > 0 && e <= 21) {
        if (static_cast<std::size_t>(e) >= m.size())
            out = m + std::string(static_cast<std::size_t>(e) - m.size(), '0');
        else
            out = m.substr(0, static_cast<std::size_t>(e)) + "." + m.substr(static_cast<std::size_t>(e));
    } else if (e <= 0 && e > -10) {
        out = "0." + std::string(static_cast<std::size_t>(-e), '0') + m;
    } else {
        out = m.substr(0, 1) + (m.size() > 1 ? "." + m.substr(1) : "") + "e" + std::to_string(e - 1);
    }
    return neg ? "-" + out : out;
}

} // namespace polarscale
