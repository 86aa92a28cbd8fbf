#pragma once

// Thin RAII value type over an MPFR number. Arithmetic operators round to
// nearest; the free functions taking an mpfr_rnd_t give directed rounding.

#include "rational.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace polarscale {

inline constexpr mpfr_prec_t kDefaultFloatBits = 256;

// The constant chain reaches magnitudes like 1e-13000; widen MPFR's exponent
// range once (process-wide) before such computations.
inline void widen_exponent_range()
{
    mpfr_set_emin(mpfr_get_emin_min());
    mpfr_set_emax(mpfr_get_emax_max());
}

class BigFloat {
public:
    BigFloat() : BigFloat(with_precision(kDefaultFloatBits)) {}

    // Zero with the given precision.
    static BigFloat with_precision(mpfr_prec_t prec) { return BigFloat(PrecisionTag{}, prec); }

private:
    struct PrecisionTag {};
    BigFloat(PrecisionTag, mpfr_prec_t prec)
    {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }

public:
    BigFloat(double d, mpfr_prec_t prec = kDefaultFloatBits)
    {
        mpfr_init2(v_, prec);
        mpfr_set_d(v_, d, MPFR_RNDN);
    }
    BigFloat(long v, mpfr_prec_t prec = kDefaultFloatBits)
    {
        mpfr_init2(v_, prec);
        mpfr_set_si(v_, v, MPFR_RNDN);
    }
    BigFloat(int v, mpfr_prec_t prec = kDefaultFloatBits) : BigFloat(static_cast<long>(v), prec) {}
    BigFloat(const Rational& q, mpfr_rnd_t rnd = MPFR_RNDN, mpfr_prec_t prec = kDefaultFloatBits)
    {
        mpfr_init2(v_, prec);
        mpfr_set_q(v_, q.get_mpq_t(), rnd);
    }
    BigFloat(const Integer& z, mpfr_rnd_t rnd = MPFR_RNDN, mpfr_prec_t prec = kDefaultFloatBits)
    {
        mpfr_init2(v_, prec);
        mpfr_set_z(v_, z.get_mpz_t(), rnd);
    }
    BigFloat(const BigFloat& o)
    {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& o) noexcept
    {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    BigFloat& operator=(const BigFloat& o)
    {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept
    {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    static BigFloat from_string(const std::string& s, mpfr_prec_t prec = kDefaultFloatBits)
    {
        BigFloat r = with_precision(prec);
        if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0 && !mpfr_number_p(r.v_))
            throw std::invalid_argument("not a number: '" + s + "'");
        return r;
    }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }
    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

    double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(v_, rnd); }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    // Exact rational value of the stored binary float.
    Rational to_rational() const
    {
        if (!is_finite())
            throw std::domain_error("non-finite BigFloat has no rational value");
        Integer m;
        mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v_);
        if (e >= 0)
            return make_rational(m << static_cast<unsigned long>(e), 1);
        return make_rational(m, shifted_one(static_cast<unsigned long>(-e)));
    }

    // Scientific rendering with 'digits' significant digits; works across the whole exponent range.
    std::string str(int digits = 20) const
    {
        if (mpfr_nan_p(v_))
            return "nan";
        if (mpfr_inf_p(v_))
            return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
        if (mpfr_zero_p(v_))
            return "0";
        mpfr_exp_t e;
        char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
        std::string m(s);
        mpfr_free_str(s);
        bool neg = m.front() == '-';
        if (neg)
            m.erase(0, 1);
        std::string out;
        if (e >= -4 && e <= 17 && e < static_cast<mpfr_exp_t>(m.size())) {
            if (e <= 0)
                out = "0." + std::string(static_cast<std::size_t>(-e), '0') + m;
            else
                out = m.substr(0, static_cast<std::size_t>(e)) + "." + m.substr(static_cast<std::size_t>(e));
            while (out.back() == '0')
                out.pop_back();
            if (out.back() == '.')
                out.pop_back();
        } else {
            std::string frac = m.substr(1);
            while (!frac.empty() && frac.back() == '0')
                frac.pop_back();
            out = m.substr(0, 1) + (frac.empty() ? "" : "." + frac) + "e" + std::to_string(e - 1);
        }
        return neg ? "-" + out : out;
    }

    BigFloat& operator+=(const BigFloat& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator-=(const BigFloat& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator*=(const BigFloat& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator/=(const BigFloat& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

    friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
    friend BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
    friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
    friend BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }
    friend BigFloat operator-(BigFloat a) { mpfr_neg(a.v_, a.v_, MPFR_RNDN); return a; }

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

private:
    mpfr_t v_;
};

namespace bf {

#define POLARSCALE_BF_UNARY(name, fn)                                                     \
    inline BigFloat name(const BigFloat& x, mpfr_rnd_t rnd = MPFR_RNDN)                    \
    {                                                                                     \
        BigFloat r = BigFloat::with_precision(x.precision());                             \
        fn(r.raw(), x.raw(), rnd);                                                        \
        return r;                                                                         \
    }

POLARSCALE_BF_UNARY(log, mpfr_log)
POLARSCALE_BF_UNARY(log2, mpfr_log2)
POLARSCALE_BF_UNARY(log1p, mpfr_log1p)
POLARSCALE_BF_UNARY(exp, mpfr_exp)
POLARSCALE_BF_UNARY(exp2, mpfr_exp2)
POLARSCALE_BF_UNARY(expm1, mpfr_expm1)
POLARSCALE_BF_UNARY(sqrt, mpfr_sqrt)
POLARSCALE_BF_UNARY(abs, mpfr_abs)

#undef POLARSCALE_BF_UNARY

#define POLARSCALE_BF_BINARY(name, fn)                                                    \
    inline BigFloat name(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd = MPFR_RNDN) \
    {                                                                                     \
        BigFloat r = BigFloat::with_precision(std::max(a.precision(), b.precision()));  \
        fn(r.raw(), a.raw(), b.raw(), rnd);                                               \
        return r;                                                                         \
    }

POLARSCALE_BF_BINARY(add, mpfr_add)
POLARSCALE_BF_BINARY(sub, mpfr_sub)
POLARSCALE_BF_BINARY(mul, mpfr_mul)
POLARSCALE_BF_BINARY(div, mpfr_div)
POLARSCALE_BF_BINARY(pow, mpfr_pow)

#undef POLARSCALE_BF_BINARY

inline BigFloat min(const BigFloat& a, const BigFloat& b) { return b < a ? b : a; }
inline BigFloat max(const BigFloat& a, const BigFloat& b) { return a < b ? b : a; }

inline BigFloat ln2(mpfr_prec_t prec = kDefaultFloatBits, mpfr_rnd_t rnd = MPFR_RNDN)
{
    BigFloat r = BigFloat::with_precision(prec);
    mpfr_const_log2(r.raw(), rnd);
    return r;
}

inline BigFloat sqrt2(mpfr_prec_t prec = kDefaultFloatBits, mpfr_rnd_t rnd = MPFR_RNDN)
{
    return sqrt(BigFloat(2L, prec), rnd);
}

} // namespace bf

} // namespace polarscale
