#pragma once

// Independent replay of transcript lines. It re-parses every side from text,
// recomputes the cross-multiplied integers, checks that they equal the recorded
// VIA operands and that the relation holds between them. Nothing here reuses
// the writer's arithmetic.

#include <gmpxx.h>

#include <cctype>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace polarscale::replay {

struct Failure {
    std::size_t line = 0;
    std::string reason;
};

struct Report {
    std::size_t assertions = 0;
    std::size_t comments = 0;
    std::vector<Failure> failures;
    bool ok() const { return failures.empty() && assertions > 0; }
};

namespace detail {

class ExprParser {
public:
    explicit ExprParser(const std::string& s) : s_(s) {}

    mpq_class parse_all()
    {
        mpq_class v = sum();
        if (pos_ != s_.size())
            throw std::invalid_argument("trailing characters in expression '" + s_ + "'");
        return v;
    }

private:
    mpq_class sum()
    {
        mpq_class v = product();
        while (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
            char op = s_[pos_++];
            mpq_class r = product();
            v = op == '+' ? mpq_class(v + r) : mpq_class(v - r);
        }
        return v;
    }
    mpq_class product()
    {
        mpq_class v = unary();
        while (pos_ < s_.size() && (s_[pos_] == '*' || s_[pos_] == '/')) {
            char op = s_[pos_++];
            mpq_class r = unary();
            if (op == '/') {
                if (r == 0)
                    throw std::invalid_argument("division by zero in expression");
                v /= r;
            } else {
                v *= r;
            }
        }
        return v;
    }
    mpq_class unary()
    {
        if (pos_ < s_.size() && s_[pos_] == '-') {
            ++pos_;
            return -unary();
        }
        return atom();
    }
    mpq_class atom()
    {
        if (pos_ < s_.size() && s_[pos_] == '(') {
            ++pos_;
            mpq_class v = sum();
            if (pos_ >= s_.size() || s_[pos_] != ')')
                throw std::invalid_argument("unbalanced parenthesis");
            ++pos_;
            return v;
        }
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (start == pos_)
            throw std::invalid_argument("expected integer at '" + s_.substr(start) + "'");
        return mpq_class(mpz_class(s_.substr(start, pos_ - start), 10));
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

struct Side {
    bool power = false;
    mpq_class value;    // rational side
    mpq_class base;     // power side
    mpq_class exponent; // power side
};

inline Side parse_side(const std::string& t)
{
    Side s;
    if (t.rfind("pow(", 0) == 0) {
        if (t.back() != ')')
            throw std::invalid_argument("malformed pow side '" + t + "'");
        std::string inner = t.substr(4, t.size() - 5);
        int depth = 0;
        std::size_t comma = std::string::npos;
        for (std::size_t i = 0; i < inner.size(); ++i) {
            if (inner[i] == '(')
                ++depth;
            else if (inner[i] == ')')
                --depth;
            else if (inner[i] == ',' && depth == 0) {
                if (comma != std::string::npos)
                    throw std::invalid_argument("pow with more than two arguments");
                comma = i;
            }
        }
        if (comma == std::string::npos)
            throw std::invalid_argument("pow without exponent");
        std::string b = inner.substr(0, comma), e = inner.substr(comma + 1);
        s.power = true;
        s.base = ExprParser(b).parse_all();
        s.exponent = ExprParser(e).parse_all();
        if (s.base < 0)
            throw std::invalid_argument("pow with negative base");
        if (s.exponent < 0) {
            if (s.base == 0)
                throw std::invalid_argument("pow of zero with negative exponent");
            s.base = 1 / s.base;
            s.exponent = -s.exponent;
        }
        return s;
    }
    s.value = ExprParser(t).parse_all();
    return s;
}

inline mpz_class ipow(const mpz_class& b, const mpz_class& e)
{
    if (e < 0 || !e.fits_ulong_p() || e > 50'000'000)
        throw std::invalid_argument("exponent out of range");
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e.get_ui());
    return r;
}

// Integers X, Y with (lhs rel rhs) <=> (X rel Y).
inline std::pair<mpz_class, mpz_class> cross(const Side& l, const Side& r)
{
    if (!l.power && !r.power)
        return {l.value.get_num() * r.value.get_den(), r.value.get_num() * l.value.get_den()};
    if (l.power && r.power) {
        mpz_class q1 = l.exponent.get_den(), q2 = r.exponent.get_den(), g;
        mpz_gcd(g.get_mpz_t(), q1.get_mpz_t(), q2.get_mpz_t());
        mpz_class L = q1 / g * q2;
        mpz_class k = l.exponent.get_num() * (L / q1);
        mpz_class m = r.exponent.get_num() * (L / q2);
        return {ipow(l.base.get_num(), k) * ipow(r.base.get_den(), m),
                ipow(r.base.get_num(), m) * ipow(l.base.get_den(), k)};
    }
    const Side& p = l.power ? l : r;
    const Side& c = l.power ? r : l;
    if (c.value < 0)
        throw std::invalid_argument("power compared against a negative value");
    mpz_class pn = p.exponent.get_num(), pd = p.exponent.get_den();
    mpz_class a = ipow(p.base.get_num(), pn) * ipow(c.value.get_den(), pd);
    mpz_class b = ipow(c.value.get_num(), pd) * ipow(p.base.get_den(), pn);
    return l.power ? std::make_pair(a, b) : std::make_pair(b, a);
}

inline bool holds(const mpz_class& a, const std::string& op, const mpz_class& b)
{
    int c = cmp(a, b);
    if (op == "<")
        return c < 0;
    if (op == "<=")
        return c <= 0;
    if (op == "=")
        return c == 0;
    if (op == ">=")
        return c >= 0;
    if (op == ">")
        return c > 0;
    throw std::invalid_argument("unknown relation '" + op + "'");
}

} // namespace detail

// Returns an empty string if the line verifies, otherwise the reason.
inline std::string verify_line(const std::string& line)
{
    std::istringstream is(line);
    std::vector<std::string> tok;
    for (std::string t; is >> t;)
        tok.push_back(t);
    if (tok.size() != 8 || tok[0] != "ASSERT" || tok[4] != "VIA")
        return "malformed line";
    if (tok[2] != tok[6])
        return "relation differs between assertion and VIA operands";
    try {
        detail::Side l = detail::parse_side(tok[1]);
        detail::Side r = detail::parse_side(tok[3]);
        auto [x, y] = detail::cross(l, r);
        mpz_class rx(tok[5], 10), ry(tok[7], 10);
        if (x != rx || y != ry)
            return "recorded VIA operands do not match recomputation";
        if (!detail::holds(x, tok[2], y))
            return "relation does not hold";
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

inline Report verify(std::istream& in)
{
    Report rep;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#') {
            ++rep.comments;
            continue;
        }
        ++rep.assertions;
        std::string why = verify_line(line);
        if (!why.empty())
            rep.failures.push_back({no, why});
    }
    return rep;
}

} // namespace polarscale::replay
