#pragma once

// Exact upper bound on sup r(x), r(x) = (T h)(x) / h(x), for a candidate h, and
// the smallest mu (bounded denominator) with sup r <= 2^(-1/mu).
//
//   sup r <= max(H0, H1, max_i (h_i^+ + h_i^-) / (2 min(h(x'_i), h(x'_{i+1}))))
//   H0 = N^-eta / 2 + 2^(eta-1)                      covers (0, 1/N)
//   H1 = 2^(eta-1) + (N - (N-1) sqrt(1 + 2/N - 1/N^2))^eta / 2   covers (1 - 1/N, 1)
// h_i^+ bounds h on [x'_i^2, x'_{i+1}^2]; h_i^- bounds h on the minus-image
// [x'_i sqrt(2 - x'_i^2), 2x'_{i+1} - x'_{i+1}^2] (BMSC) or
// [2x'_i - x'_i^2, 2x'_{i+1} - x'_{i+1}^2] (BEC).
//
// The middle pass works on integers: image points are kept in units of
// 1/(N 2^sub_bits)^2, h values in units of 2^-value_bits, and every rounding
// goes against the bound.

#include "candidate.hpp"
#include "eigen_iter.hpp"
#include "parallel.hpp"
#include "power_bound.hpp"
#include "transcript.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace polarscale {

struct CertifyOptions {
    unsigned long precision_bits = 128;
    std::uint64_t mu_max_den = 1000;
    bool full_transcript = false; // one line per middle interval and tail guard
    unsigned threads = 1;
};

struct GuardReport {
    bool ok = true;
    std::size_t checked = 0;
    std::string diagnostic;
};

struct MiddleBound {
    Rational max_ratio;
    std::size_t arg_interval = 0;
    std::uint64_t h_plus = 0;
    std::uint64_t h_minus = 0;
    std::uint64_t h_min = 0;
    std::size_t intervals = 0;
};

struct CertifiedBound {
    bool success = false;
    Rational h0;
    Rational h1;
    Rational middle_max;
    std::size_t arg_interval = 0;
    Rational sup_bound;
    std::optional<Rational> mu;
    std::string diagnostic;
};

// ---------------------------------------------------------------------------
// H0, H1

inline Rational bound_H0(const CandidateFunction& c, Transcript* t = nullptr, unsigned long bits = 128)
{
    Rational inv_n = make_rational(Integer(1), Integer(static_cast<unsigned long>(c.grid_size)));
    Rational r0 = rational_power_bound(inv_n, c.eta, Rounding::up, bits);
    Rational r1 = rational_power_bound(Rational(2), c.eta - 1, Rounding::up, bits);
    Rational h0 = r0 / 2 + r1;
    if (t) {
        t->comment("H0 = N^-eta/2 + 2^(eta-1), N = " + std::to_string(c.grid_size) + ", eta = " + to_string(c.eta));
        t->assert_le(TranscriptSide::power(inv_n, c.eta), TranscriptSide::value(r0));
        t->assert_le(TranscriptSide::power(Rational(2), c.eta - 1), TranscriptSide::value(r1));
        t->assert_eq(TranscriptSide::expression(h0, "(" + to_string(r0) + ")/2+" + to_string(r1)), TranscriptSide::value(h0));
    }
    return h0;
}

// Upper enclosure of N - (N-1) sqrt(1 + 2/N - 1/N^2) = (N^2 - (N-1) sqrt(N^2 + 2N - 1)) / N.
inline Rational h1_bracket_upper(std::uint64_t n, unsigned long bits, Rational* root_lower = nullptr)
{
    Integer N(static_cast<unsigned long>(n));
    Integer rad = N * N + 2 * N - 1;
    Rational s = make_rational(isqrt_floor(rad << (2 * bits)), shifted_one(bits));
    if (root_lower)
        *root_lower = s;
    return (Rational(N * N) - Rational(N - 1) * s) / Rational(N);
}

inline Rational bound_H1(const CandidateFunction& c, Transcript* t = nullptr, unsigned long bits = 128)
{
    Integer N(static_cast<unsigned long>(c.grid_size));
    Rational s;
    Rational bracket = h1_bracket_upper(c.grid_size, bits, &s);
    if (bracket <= 0 || bracket > 1)
        throw std::logic_error("H1 bracket outside (0,1]");
    Rational r1 = rational_power_bound(Rational(2), c.eta - 1, Rounding::up, bits);
    Rational r2 = rational_power_bound(bracket, c.eta, Rounding::up, bits);
    Rational h1 = r1 + r2 / 2;
    if (t) {
        t->comment("H1 = 2^(eta-1) + (N - (N-1) sqrt(1+2/N-1/N^2))^eta / 2; s <= sqrt(N^2+2N-1)");
        Integer rad = N * N + 2 * N - 1;
        t->assert_ge(TranscriptSide::power(Rational(rad), make_rational(1, 2)), TranscriptSide::value(s));
        t->assert_eq(TranscriptSide::expression(bracket, "(" + N.get_str() + "*" + N.get_str() + "-" + Integer(N - 1).get_str() +
                                                            "*(" + to_string(s) + "))/" + N.get_str()),
                     TranscriptSide::value(bracket));
        t->assert_le(TranscriptSide::power(Rational(2), c.eta - 1), TranscriptSide::value(r1));
        t->assert_le(TranscriptSide::power(bracket, c.eta), TranscriptSide::value(r2));
        t->assert_eq(TranscriptSide::expression(h1, to_string(r1) + "+(" + to_string(r2) + ")/2"), TranscriptSide::value(h1));
    }
    return h1;
}

// ---------------------------------------------------------------------------
// Guards near the junctions

// Checks, on the breakpoints up to the first one at or beyond 2/N (and the mirror
// range near 1): values do not exceed b0 (b1), are monotone, and b0 (b1) is concave
// on every sampled tail pair. Together with the concavity of the tails this gives
// h <= b0 on [0, 2/N] and h <= b1 on [1 - 2/N, 1].
inline GuardReport check_tail_guards(const CandidateFunction& c, Transcript* t = nullptr, bool full = false,
                                     unsigned long bits = 128)
{
    GuardReport rep;
    const Integer xden(static_cast<unsigned long>(c.x_den()));
    const std::uint64_t two = 2 * c.cell();
    const std::size_t n = c.size();
    auto fail = [&](const std::string& why) {
        rep.ok = false;
        if (rep.diagnostic.empty())
            rep.diagnostic = why;
    };
    if (c.junction0 == 0 || c.junction1 == 0) {
        fail("zero junction value");
        return rep;
    }
    auto check_dominated = [&](std::size_t j, bool left) {
        Integer X(static_cast<unsigned long>(c.xs[j]));
        Rational tv = left ? c.left_t(X, xden) : c.right_t(X, xden);
        Rational ratio = make_rational(Integer(static_cast<unsigned long>(c.hs[j])),
                                       Integer(static_cast<unsigned long>(left ? c.junction0 : c.junction1)));
        // h_j <= J t^eta  <=>  h_j / J <= t^eta
        if (compare_power(tv, c.eta, ratio) < 0)
            fail("breakpoint " + std::to_string(j) + " exceeds the tail power law");
        if (t && full)
            t->assert_le(TranscriptSide::value(ratio), TranscriptSide::power(tv, c.eta));
        ++rep.checked;
    };

    std::size_t jl = 0;
    while (jl + 1 < n && c.xs[jl] < two)
        ++jl;
    for (std::size_t j = 0; j <= jl; ++j) {
        check_dominated(j, true);
        if (j > 0 && c.hs[j] < c.hs[j - 1])
            fail("candidate not increasing on [1/N, 2/N]");
    }
    std::size_t jr = n - 1;
    while (jr > 0 && c.x_den() - c.xs[jr] < two)
        --jr;
    for (std::size_t j = jr; j < n; ++j) {
        check_dominated(j, false);
        if (j > jr && c.hs[j] > c.hs[j - 1])
            fail("candidate not decreasing on [1 - 2/N, 1 - 1/N]");
    }

    // Concavity of the power tails on each sampled pair: midpoint value >= chord value.
    auto concave_pair = [&](std::uint64_t xa, std::uint64_t xb, bool left) {
        Integer A(static_cast<unsigned long>(xa)), B(static_cast<unsigned long>(xb));
        Integer M = A + B;
        Integer den2 = 2 * xden;
        Rational ta = left ? c.left_t(A, xden) : c.right_t(A, xden);
        Rational tb = left ? c.left_t(B, xden) : c.right_t(B, xden);
        Rational tm = left ? c.left_t(M, den2) : c.right_t(M, den2);
        Rational mid = rational_power_bound(tm, c.eta, Rounding::down, bits);
        Rational chord = (rational_power_bound(ta, c.eta, Rounding::up, bits) +
                          rational_power_bound(tb, c.eta, Rounding::up, bits)) / 2;
        if (mid < chord)
            fail("tail concavity check failed between breakpoints");
        ++rep.checked;
    };
    for (std::size_t j = 0; j + 1 < n && c.xs[j + 1] <= c.mbar * c.cell(); ++j)
        concave_pair(c.xs[j], c.xs[j + 1], true);
    for (std::size_t j = n - 1; j > 0 && c.xs[j - 1] >= (c.grid_size - c.mbar) * c.cell(); --j)
        concave_pair(c.xs[j - 1], c.xs[j], false);
    return rep;
}

// ---------------------------------------------------------------------------
// Middle intervals

namespace detail {

class MaxTree {
public:
    explicit MaxTree(const std::vector<std::uint64_t>& v) : n_(v.size()), t_(2 * v.size())
    {
        std::copy(v.begin(), v.end(), t_.begin() + static_cast<std::ptrdiff_t>(n_));
        for (std::size_t i = n_ - 1; i > 0; --i)
            t_[i] = std::max(t_[2 * i], t_[2 * i + 1]);
    }
    // max over [l, r], inclusive
    std::uint64_t query(std::size_t l, std::size_t r) const
    {
        std::uint64_t m = 0;
        for (l += n_, r += n_ + 1; l < r; l >>= 1, r >>= 1) {
            if (l & 1)
                m = std::max(m, t_[l++]);
            if (r & 1)
                m = std::max(m, t_[--r]);
        }
        return m;
    }

private:
    std::size_t n_;
    std::vector<std::uint64_t> t_;
};

// Upper bounds of h over ranges of [0,1] given in units of 1/D^2, D = x_den.
class HSup {
public:
    HSup(const CandidateFunction& c, unsigned long bits) : c_(c), tree_(c.hs), bits_(bits)
    {
        D_ = c.x_den();
        D2_ = to_integer(static_cast<u128>(D_) * D_);
        left_ = static_cast<u128>(c.xs.front()) * D_;
        right_ = static_cast<u128>(c.xs.back()) * D_;
        cap0_ = b0_upper(left_);
        cap1_ = b1_upper(right_);
    }

    std::uint64_t b0_upper(u128 u) const
    {
        Rational tv = c_.left_t(to_integer(u), D2_);
        return c_.tail_value(c_.junction0, tv, Rounding::up, bits_).get_ui();
    }
    std::uint64_t b1_upper(u128 u) const
    {
        Rational tv = c_.right_t(to_integer(u), D2_);
        return c_.tail_value(c_.junction1, tv, Rounding::up, bits_).get_ui();
    }

    // Upper bound of the interpolant at u, left_ <= u <= right_.
    std::uint64_t interp_upper(u128 u) const
    {
        std::uint64_t k = static_cast<std::uint64_t>(u / D_);
        auto it = std::upper_bound(c_.xs.begin(), c_.xs.end(), k);
        std::size_t j = static_cast<std::size_t>(it - c_.xs.begin()) - 1;
        u128 base = static_cast<u128>(c_.xs[j]) * D_;
        if (base == u)
            return c_.hs[j];
        u128 off = u - base;
        u128 span = static_cast<u128>(c_.xs[j + 1] - c_.xs[j]) * D_;
        std::uint64_t a = c_.hs[j], b = c_.hs[j + 1];
        if (b >= a) {
            u128 num = static_cast<u128>(b - a) * off;
            return a + static_cast<std::uint64_t>((num + span - 1) / span);
        }
        u128 num = static_cast<u128>(a - b) * off;
        return a - static_cast<std::uint64_t>(num / span);
    }

    std::uint64_t sup(u128 lo, u128 hi) const
    {
        std::uint64_t best = 0;
        if (lo < left_)
            best = std::max(best, hi >= left_ ? cap0_ : b0_upper(hi));
        if (hi > right_)
            best = std::max(best, lo <= right_ ? cap1_ : b1_upper(lo));
        u128 a = std::max(lo, left_), b = std::min(hi, right_);
        if (a <= b) {
            best = std::max({best, interp_upper(a), interp_upper(b)});
            std::uint64_t ka = static_cast<std::uint64_t>((a + D_ - 1) / D_);
            std::uint64_t kb = static_cast<std::uint64_t>(b / D_);
            auto ia = std::lower_bound(c_.xs.begin(), c_.xs.end(), ka);
            auto ib = std::upper_bound(c_.xs.begin(), c_.xs.end(), kb);
            if (ia < ib)
                best = std::max(best, tree_.query(static_cast<std::size_t>(ia - c_.xs.begin()),
                                                  static_cast<std::size_t>(ib - c_.xs.begin()) - 1));
        }
        return best;
    }

    u128 den() const { return D_; }

private:
    const CandidateFunction& c_;
    MaxTree tree_;
    unsigned long bits_;
    std::uint64_t D_;
    Integer D2_;
    u128 left_, right_;
    std::uint64_t cap0_, cap1_;
};

// floor(X sqrt(2 D^2 - X^2)), i.e. a lower bound of x sqrt(2 - x^2) in units of 1/D^2.
inline u128 sqrt_image_floor(std::uint64_t X, std::uint64_t D)
{
    Integer x(static_cast<unsigned long>(X)), d(static_cast<unsigned long>(D));
    Integer v = x * x * (2 * d * d - x * x);
    return to_u128(isqrt_floor(v));
}

struct IntervalBound {
    std::uint64_t hp = 0, hm = 0, hmin = 1;
};

inline bool ratio_greater(const IntervalBound& a, const IntervalBound& b)
{
    // (a.hp + a.hm) / a.hmin > (b.hp + b.hm) / b.hmin
    return static_cast<u128>(a.hp + a.hm) * b.hmin > static_cast<u128>(b.hp + b.hm) * a.hmin;
}

inline IntervalBound interval_bound(const CandidateFunction& c, const HSup& hs, ChannelOperator op, std::size_t i)
{
    const u128 D = hs.den();
    const std::uint64_t Xa = c.xs[i], Xb = c.xs[i + 1];
    const u128 a2 = static_cast<u128>(Xa) * Xa, b2 = static_cast<u128>(Xb) * Xb;
    IntervalBound r;
    r.hp = hs.sup(a2, b2);
    u128 up = 2 * static_cast<u128>(Xb) * D - b2;
    u128 lo = op == ChannelOperator::bec ? 2 * static_cast<u128>(Xa) * D - a2
                                          : sqrt_image_floor(Xa, static_cast<std::uint64_t>(D));
    r.hm = hs.sup(lo, up);
    r.hmin = std::min(c.hs[i], c.hs[i + 1]);
    if (r.hmin == 0)
        throw std::domain_error("candidate has a zero interior value");
    return r;
}

} // namespace detail

inline Rational interval_ratio(std::uint64_t hp, std::uint64_t hm, std::uint64_t hmin)
{
    return make_rational(Integer(static_cast<unsigned long>(hp)) + Integer(static_cast<unsigned long>(hm)),
                         2 * Integer(static_cast<unsigned long>(hmin)));
}

inline MiddleBound bound_middle(const CandidateFunction& c, ChannelOperator op, const CertifyOptions& opt = {},
                                Transcript* t = nullptr)
{
    c.validate();
    detail::HSup hs(c, 64);
    const std::size_t m = c.size() - 1;
    unsigned threads = std::max(1u, opt.threads);
    std::size_t chunks = threads;
    std::vector<detail::IntervalBound> best(chunks);
    std::vector<std::size_t> arg(chunks, 0);
    std::vector<bool> seen(chunks, false);
    std::vector<std::vector<detail::IntervalBound>> all;
    if (opt.full_transcript)
        all.assign(1, std::vector<detail::IntervalBound>(m));
    std::size_t per = (m + chunks - 1) / chunks;
    parallel_for(0, chunks, threads, [&](std::size_t k0, std::size_t k1) {
        for (std::size_t k = k0; k < k1; ++k) {
            std::size_t lo = k * per, hi = std::min(m, lo + per);
            for (std::size_t i = lo; i < hi; ++i) {
                detail::IntervalBound b = detail::interval_bound(c, hs, op, i);
                if (opt.full_transcript)
                    all[0][i] = b;
                if (!seen[k] || detail::ratio_greater(b, best[k])) {
                    best[k] = b;
                    arg[k] = i;
                    seen[k] = true;
                }
            }
        }
    });
    // fixed-order reduction: ties keep the smaller interval index
    std::size_t kb = 0;
    for (std::size_t k = 1; k < chunks; ++k)
        if (seen[k] && (!seen[kb] || detail::ratio_greater(best[k], best[kb])))
            kb = k;
    MiddleBound mb;
    mb.h_plus = best[kb].hp;
    mb.h_minus = best[kb].hm;
    mb.h_min = best[kb].hmin;
    mb.arg_interval = arg[kb];
    mb.intervals = m;
    mb.max_ratio = interval_ratio(mb.h_plus, mb.h_minus, mb.h_min);
    if (t) {
        const std::size_t i = mb.arg_interval;
        t->comment("middle intervals: " + std::to_string(m) + " (" + std::string(to_string(op)) + "); maximum at interval " +
                   std::to_string(i) + " = [" + to_string(c.x(i)) + ", " + to_string(c.x(i + 1)) + "]");
        t->comment("h+ = " + std::to_string(mb.h_plus) + ", h- = " + std::to_string(mb.h_minus) + ", min h = " +
                   std::to_string(mb.h_min) + " (units of 2^-" + std::to_string(c.value_bits) + ")");
        t->assert_eq(TranscriptSide::expression(mb.max_ratio, "(" + std::to_string(mb.h_plus) + "+" + std::to_string(mb.h_minus) +
                                                                 ")/(2*" + std::to_string(mb.h_min) + ")"),
                     TranscriptSide::value(mb.max_ratio));
        if (opt.full_transcript) {
            for (std::size_t j = 0; j < m; ++j) {
                const auto& b = all[0][j];
                t->assert_le(TranscriptSide::expression(interval_ratio(b.hp, b.hm, b.hmin),
                                                        "(" + std::to_string(b.hp) + "+" + std::to_string(b.hm) + ")/(2*" +
                                                            std::to_string(b.hmin) + ")"),
                             TranscriptSide::value(mb.max_ratio));
            }
        }
    }
    return mb;
}

// ---------------------------------------------------------------------------
// mu

// s <= 2^(-1/mu) for mu = p/q  <=>  a^p 2^q <= b^p  (s = a/b).
inline bool mu_holds(const Rational& s, const Rational& mu)
{
    if (s <= 0)
        return true;
    unsigned long p = mu.get_num().get_ui(), q = mu.get_den().get_ui();
    return pow_int(s.get_num(), p) * shifted_one(q) <= pow_int(s.get_den(), p);
}

// Smallest p/q with q <= max_den and s <= 2^(-q/p). Requires 0 < s < 1.
inline std::optional<Rational> smallest_certified_mu(const Rational& s, std::uint64_t max_den)
{
    if (s <= 0 || s >= 1)
        return std::nullopt;
    // -log2 s, only used to place the search; every decision is an exact test
    double l = -std::log2(to_double(s));
    std::optional<Rational> best;
    for (std::uint64_t q = 1; q <= max_den; ++q) {
        unsigned long p = static_cast<unsigned long>(std::max(1.0, std::floor(static_cast<double>(q) / l)));
        Integer Q(static_cast<unsigned long>(q));
        while (p > 1 && mu_holds(s, make_rational(Integer(p - 1), Q)))
            --p;
        while (!mu_holds(s, make_rational(Integer(p), Q)))
            ++p;
        Rational mu = make_rational(Integer(p), Q);
        if (!best || mu < *best)
            best = mu;
    }
    return best;
}

// Writes the certificate of s <= 2^(-1/mu): first through a short dyadic upper
// bound of s (128 bits, then 256), falling back to s itself.
inline void transcript_mu(Transcript& t, const Rational& s, const Rational& mu)
{
    Rational e = 1 / mu;
    for (unsigned long bits : {128ul, 256ul}) {
        Rational su = round_up_dyadic(s, bits);
        if (mu_holds(su, mu)) {
            t.assert_le(TranscriptSide::value(s), TranscriptSide::value(su));
            t.assert_le(TranscriptSide::value(su), TranscriptSide::power(make_rational(1, 2), e));
            return;
        }
    }
    t.assert_le(TranscriptSide::value(s), TranscriptSide::power(make_rational(1, 2), e));
}

inline CertifiedBound certify(const CandidateFunction& c, ChannelOperator op, const CertifyOptions& opt = {},
                              Transcript* t = nullptr)
{
    CertifiedBound cb;
    c.validate();
    if (!adjacency_holds(c)) {
        cb.diagnostic = "adjacent candidate values violate the 1 + delta_s rule";
        return cb;
    }
    GuardReport g = check_tail_guards(c, t, opt.full_transcript, opt.precision_bits);
    if (!g.ok) {
        cb.diagnostic = "guard failure: " + g.diagnostic;
        return cb;
    }
    if (t)
        t->comment("tail guards passed on " + std::to_string(g.checked) + " checks");
    cb.h0 = bound_H0(c, t, opt.precision_bits);
    cb.h1 = bound_H1(c, t, opt.precision_bits);
    MiddleBound mb = bound_middle(c, op, opt, t);
    cb.middle_max = mb.max_ratio;
    cb.arg_interval = mb.arg_interval;
    cb.sup_bound = std::max({cb.h0, cb.h1, cb.middle_max});
    if (t) {
        t->comment("sup r <= max(H0, H1, middle)");
        t->assert_le(TranscriptSide::value(cb.h0), TranscriptSide::value(cb.sup_bound));
        t->assert_le(TranscriptSide::value(cb.h1), TranscriptSide::value(cb.sup_bound));
        t->assert_le(TranscriptSide::value(cb.middle_max), TranscriptSide::value(cb.sup_bound));
    }
    if (cb.sup_bound >= 1) {
        cb.diagnostic = "sup bound " + to_decimal(cb.sup_bound, 10) + " is not below 1; no scaling exponent certified";
        if (t)
            t->assert_lt(TranscriptSide::value(cb.sup_bound), TranscriptSide::value(Rational(1)));
        return cb;
    }
    cb.mu = smallest_certified_mu(cb.sup_bound, opt.mu_max_den);
    if (t && cb.mu) {
        t->comment("mu = " + to_string(*cb.mu) + ": sup bound <= 2^(-1/mu)");
        transcript_mu(*t, cb.sup_bound, *cb.mu);
    }
    cb.success = cb.mu.has_value();
    return cb;
}

} // namespace polarscale
