#pragma once

// Machine-checkable certificate lines:
//   ASSERT <lhs> <op> <rhs> VIA <int> <op> <int>
// A side is a rational expression over integers (+ - * / and parentheses) or a
// top-level pow(base,exponent) with rational base >= 0 and rational exponent.
// The VIA integers are the cross-multiplied operands whose comparison is
// equivalent to the asserted relation:
//   rational a/b vs c/d              : a d  vs c b
//   pow(a/b, p/q) vs c/d             : a^p d^q vs c^q b^p
//   pow(a/b, p/q) vs pow(c/d, r/s)   : with L = lcm(q,s), k = pL/q, m = rL/s:
//                                      a^k d^m vs c^m b^k
// Negative exponents are written with the reciprocal base. Lines starting with
// '#' are comments.

#include "rational.hpp"

#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace polarscale {

enum class Relation { lt, le, eq, ge, gt };

inline std::string_view relation_symbol(Relation r)
{
    switch (r) {
    case Relation::lt: return "<";
    case Relation::le: return "<=";
    case Relation::eq: return "=";
    case Relation::ge: return ">=";
    case Relation::gt: return ">";
    }
    return "?";
}

inline bool relation_holds(int cmp_result, Relation r)
{
    switch (r) {
    case Relation::lt: return cmp_result < 0;
    case Relation::le: return cmp_result <= 0;
    case Relation::eq: return cmp_result == 0;
    case Relation::ge: return cmp_result >= 0;
    case Relation::gt: return cmp_result > 0;
    }
    return false;
}

struct PowerTerm {
    Rational base;
    Rational exponent;
};

// One side of an assertion: an exact value plus the text written for it.
class TranscriptSide {
public:
    static TranscriptSide value(const Rational& q) { return TranscriptSide(q, to_string(q)); }

    // 'text' must be an expression that evaluates exactly to q.
    static TranscriptSide expression(const Rational& q, std::string text) { return TranscriptSide(q, std::move(text)); }

    static TranscriptSide power(Rational base, Rational exponent)
    {
        if (base < 0)
            throw std::domain_error("transcript power with negative base");
        if (exponent < 0) {
            if (base == 0)
                throw std::domain_error("transcript power: zero base with negative exponent");
            base = 1 / base;
            exponent = -exponent;
        }
        TranscriptSide s;
        s.text_ = "pow(" + to_string(base) + "," + to_string(exponent) + ")";
        s.v_ = PowerTerm{std::move(base), std::move(exponent)};
        return s;
    }

    const std::string& text() const { return text_; }
    bool is_power() const { return std::holds_alternative<PowerTerm>(v_); }
    const Rational& rational() const { return std::get<Rational>(v_); }
    const PowerTerm& power_term() const { return std::get<PowerTerm>(v_); }

private:
    TranscriptSide() = default;
    TranscriptSide(Rational q, std::string t) : text_(std::move(t)), v_(std::move(q)) {}

    std::string text_;
    std::variant<Rational, PowerTerm> v_;
};

struct ViaOperands {
    Integer lhs;
    Integer rhs;
};

namespace detail {

inline unsigned long small_exp(const Integer& v)
{
    if (v < 0 || !v.fits_ulong_p())
        throw std::domain_error("transcript exponent out of range");
    return v.get_ui();
}

} // namespace detail

inline ViaOperands via_operands(const TranscriptSide& l, const TranscriptSide& r)
{
    if (!l.is_power() && !r.is_power()) {
        const Rational& a = l.rational();
        const Rational& b = r.rational();
        return {a.get_num() * b.get_den(), b.get_num() * a.get_den()};
    }
    if (l.is_power() && r.is_power()) {
        const PowerTerm& a = l.power_term();
        const PowerTerm& b = r.power_term();
        Integer q1 = a.exponent.get_den(), q2 = b.exponent.get_den();
        Integer L;
        mpz_lcm(L.get_mpz_t(), q1.get_mpz_t(), q2.get_mpz_t());
        unsigned long k = detail::small_exp(a.exponent.get_num() * L / q1);
        unsigned long m = detail::small_exp(b.exponent.get_num() * L / q2);
        return {pow_int(a.base.get_num(), k) * pow_int(b.base.get_den(), m),
                pow_int(b.base.get_num(), m) * pow_int(a.base.get_den(), k)};
    }
    bool power_left = l.is_power();
    const PowerTerm& pt = power_left ? l.power_term() : r.power_term();
    const Rational& c = power_left ? r.rational() : l.rational();
    if (c < 0)
        throw std::domain_error("power compared against a negative rational");
    unsigned long p = detail::small_exp(pt.exponent.get_num());
    unsigned long q = detail::small_exp(pt.exponent.get_den());
    Integer pow_side = pow_int(pt.base.get_num(), p) * pow_int(c.get_den(), q);
    Integer rat_side = pow_int(c.get_num(), q) * pow_int(pt.base.get_den(), p);
    return power_left ? ViaOperands{pow_side, rat_side} : ViaOperands{rat_side, pow_side};
}

class Transcript {
public:
    void comment(const std::string& text) { lines_.push_back("# " + text); }

    // Records the assertion; returns whether it holds. A failing assertion is
    // still written (the replay will then report it) so that nothing is hidden.
    bool assert_that(const TranscriptSide& l, Relation rel, const TranscriptSide& r)
    {
        ViaOperands v = via_operands(l, r);
        int c = cmp(v.lhs, v.rhs);
        bool ok = relation_holds(c, rel);
        std::string sym(relation_symbol(rel));
        lines_.push_back("ASSERT " + l.text() + " " + sym + " " + r.text() + " VIA " + v.lhs.get_str() + " " + sym +
                         " " + v.rhs.get_str());
        ++asserts_;
        if (!ok)
            ++failures_;
        return ok;
    }

    bool assert_le(const TranscriptSide& l, const TranscriptSide& r) { return assert_that(l, Relation::le, r); }
    bool assert_lt(const TranscriptSide& l, const TranscriptSide& r) { return assert_that(l, Relation::lt, r); }
    bool assert_ge(const TranscriptSide& l, const TranscriptSide& r) { return assert_that(l, Relation::ge, r); }
    bool assert_eq(const TranscriptSide& l, const TranscriptSide& r) { return assert_that(l, Relation::eq, r); }

    void append(const Transcript& o)
    {
        lines_.insert(lines_.end(), o.lines_.begin(), o.lines_.end());
        asserts_ += o.asserts_;
        failures_ += o.failures_;
    }

    const std::vector<std::string>& lines() const { return lines_; }
    std::size_t assertions() const { return asserts_; }
    std::size_t failures() const { return failures_; }

    void write(std::ostream& os) const
    {
        for (const auto& l : lines_)
            os << l << '\n';
    }

private:
    std::vector<std::string> lines_;
    std::size_t asserts_ = 0;
    std::size_t failures_ = 0;
};

} // namespace polarscale
