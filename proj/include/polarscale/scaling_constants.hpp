#pragma once

// Constant chain turning a certified supremum into a block-length bound:
//   rho1 = min(1/2, -log2 s),  a = 2^(-1/mu),  b = 2^(-rho1)
//   alpha = log2(1 + (a - b)/(a + b))
//   delta = (a - b) / (2 sqrt2 c3 + a - b)
//   rho   = -log2(b + sqrt2 delta/(1 - delta) c3)
//   c1 = 1/delta,  c2 = sqrt(2 pe) + 2 c1 pe^-alpha,  beta1 = c2^mu
// c3 is the sup of (x(1-x))^alpha / h(x) over (eps1, 1 - eps2), where eps1 and
// 1 - eps2 are the two roots of t(x) = b with
//   t(x) = ((x(1+x))^alpha + ((2-x)(1-x)^(1/3))^alpha) / 2.
// For small alpha the roots are astronomically close to 0 and 1, so everything
// here runs in MPFR with the exponent range widened and the roots are located
// by bisection on the logarithm of the distance to the endpoint.

#include "bigfloat.hpp"
#include "candidate.hpp"
#include "certify.hpp"
#include "polar_core.hpp"
#include "power_bound.hpp"
#include "rational.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace polarscale {

inline constexpr mpfr_prec_t kChainBits = 256;

struct EpsRoots {
    BigFloat eps1;      // t(eps1) < b, eps1 below the left root
    BigFloat eps2;      // t(1 - eps2) < b, eps2 below the distance of the right root to 1
    BigFloat log_eps1;  // natural logs of the two values
    BigFloat log_eps2;
};

namespace detail {

// t at x = exp(lx) (left side, x small) or at x = 1 - exp(lu) (right side).
inline BigFloat t_left(const BigFloat& alpha, const BigFloat& lx)
{
    BigFloat x = bf::exp(lx);
    BigFloat p1 = bf::exp(alpha * (lx + bf::log1p(x)));
    BigFloat two_minus = BigFloat(2L, lx.precision()) - x;
    BigFloat p2 = bf::exp(alpha * (bf::log(two_minus) + bf::log1p(-x) / BigFloat(3L, lx.precision())));
    return (p1 + p2) / BigFloat(2L, lx.precision());
}

inline BigFloat t_right(const BigFloat& alpha, const BigFloat& lu)
{
    BigFloat u = bf::exp(lu);
    BigFloat one(1L, lu.precision());
    BigFloat p1 = bf::exp(alpha * (bf::log1p(-u) + bf::log(BigFloat(2L, lu.precision()) - u)));
    BigFloat p2 = bf::exp(alpha * (bf::log1p(u) + lu / BigFloat(3L, lu.precision())));
    return (p1 + p2) / BigFloat(2L, lu.precision());
}

template <class T>
BigFloat bisect_log(T&& t, const BigFloat& target, double tol)
{
    // t(exp(L)) < target for L very negative, > target at L = log(1/2).
    mpfr_prec_t prec = target.precision();
    BigFloat hi = bf::log(BigFloat(0.5, prec));
    if (!(t(hi) > target))
        throw std::domain_error("t(1/2) does not exceed 2^-rho1: alpha too large for the eps equation");
    BigFloat lo(-1L, prec);
    int guard = 0;
    while (!(t(lo) < target)) {
        hi = lo;
        lo = lo * BigFloat(2L, prec);
        if (++guard > 200)
            throw std::domain_error("no sign change found for the eps equation");
    }
    BigFloat tolb(tol, prec);
    for (int it = 0; it < 2000; ++it) {
        BigFloat width = hi - lo;
        BigFloat scale = bf::max(BigFloat(1L, prec), bf::abs(lo));
        if (width <= tolb * scale)
            break;
        BigFloat mid = (lo + hi) / BigFloat(2L, prec);
        if (t(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

} // namespace detail

inline BigFloat t_function(const BigFloat& alpha, const BigFloat& x)
{
    mpfr_prec_t prec = std::max(alpha.precision(), x.precision());
    BigFloat one(1L, prec), two(2L, prec), three(3L, prec);
    if (x.sign() < 0 || x > one)
        throw std::domain_error("t(x) needs x in [0,1]");
    BigFloat p1 = x.is_zero() ? BigFloat(0L, prec) : bf::pow(x * (one + x), alpha);
    BigFloat q = (two - x) * bf::exp(bf::log1p(-x) / three);
    BigFloat p2 = x == one ? BigFloat(0L, prec) : bf::pow(q, alpha);
    return (p1 + p2) / two;
}

// Roots of t(x) = 2^-rho1; returned values sit on the side where t < 2^-rho1,
// so (eps1, 1 - eps2) contains the true interval.
inline EpsRoots solve_eps(const BigFloat& alpha, const BigFloat& rho1, double tol = 1e-12)
{
    widen_exponent_range();
    mpfr_prec_t prec = std::max<mpfr_prec_t>(kChainBits, alpha.precision());
    BigFloat half(0.5, prec);
    if (!(alpha.sign() > 0) || !(alpha < half))
        throw std::domain_error("solve_eps needs alpha in (0, 1/2)");
    BigFloat astar = bf::min(half, rho1 / bf::log2(BigFloat(4L, prec) / BigFloat(3L, prec)));
    if (!(alpha < astar))
        throw std::domain_error("solve_eps needs alpha < min(1/2, rho1/log2(4/3))");
    BigFloat target = bf::exp2(-rho1);
    EpsRoots r;
    r.log_eps1 = detail::bisect_log([&](const BigFloat& l) { return detail::t_left(alpha, l); }, target, tol);
    r.log_eps2 = detail::bisect_log([&](const BigFloat& l) { return detail::t_right(alpha, l); }, target, tol);
    r.eps1 = bf::exp(r.log_eps1, MPFR_RNDD);
    r.eps2 = bf::exp(r.log_eps2, MPFR_RNDD);
    return r;
}

struct C3Bound {
    BigFloat value;        // upper enclosure of the sup
    BigFloat left_tail;    // contribution of [eps1, 1/N)
    BigFloat right_tail;   // contribution of (1 - 1/N, 1 - eps2]
    BigFloat middle;       // contribution of the linear pieces
    std::size_t refined_blocks = 0;
};

namespace detail {

// Upper bound of (x(1-x))^alpha / (J (d N / mbar)^eta) for d = distance to the
// nearer endpoint, over d in [d_lo, d_hi]. Uses (x(1-x))^alpha <= d^alpha; the
// remaining power of d is monotone, so the endpoints suffice.
inline BigFloat tail_ratio_upper(const CandidateFunction& c, std::uint64_t junction, const BigFloat& alpha,
                                 const BigFloat& d_lo, const BigFloat& d_hi)
{
    mpfr_prec_t prec = alpha.precision();
    BigFloat eta(c.eta, MPFR_RNDN, prec);
    BigFloat scale(make_rational(Integer(static_cast<unsigned long>(c.grid_size)), Integer(static_cast<unsigned long>(c.mbar))),
                   MPFR_RNDD, prec);
    BigFloat j(make_rational(Integer(static_cast<unsigned long>(junction)), c.h_den()), MPFR_RNDD, prec);
    auto at = [&](const BigFloat& d) {
        BigFloat num = bf::pow(d, alpha, MPFR_RNDU);
        BigFloat den = bf::mul(j, bf::pow(bf::mul(d, scale, MPFR_RNDD), eta, MPFR_RNDD), MPFR_RNDD);
        return bf::div(num, den, MPFR_RNDU);
    };
    return bf::max(at(d_lo), at(d_hi));
}

} // namespace detail

// Upper enclosure of c3 on the candidate. Tails are bounded analytically, the
// linear part piece by piece: max of (x(1-x))^alpha over the piece divided by the
// smaller endpoint value. Pieces are grouped in blocks; a block is refined into
// its pieces only while its coarse bound can still raise the maximum.
inline C3Bound compute_c3(const CandidateFunction& c, const BigFloat& alpha, const EpsRoots& eps,
                          std::size_t block = 256)
{
    widen_exponent_range();
    c.validate();
    const mpfr_prec_t prec = std::max<mpfr_prec_t>(alpha.precision(), 64);
    const BigFloat one(1L, prec);
    const BigFloat e1 = eps.eps1;
    const BigFloat e2 = bf::sub(one, eps.eps2, MPFR_RNDU); // right end of the open interval
    if (!(e1 < e2))
        throw std::domain_error("c3 interval (eps1, 1 - eps2) is empty");
    for (auto v : c.hs)
        if (v == 0)
            throw std::domain_error("candidate has a zero interior value");

    C3Bound out{BigFloat(0L, prec), BigFloat(0L, prec), BigFloat(0L, prec), BigFloat(0L, prec), 0};
    const BigFloat inv_n(make_rational(1, static_cast<long>(c.grid_size)), MPFR_RNDU, prec);

    if (e1 < inv_n)
        out.left_tail = detail::tail_ratio_upper(c, c.junction0, alpha, e1, inv_n);
    if (bf::sub(one, inv_n, MPFR_RNDD) < e2)
        out.right_tail = detail::tail_ratio_upper(c, c.junction1, alpha, eps.eps2, inv_n);

    const Integer xden(static_cast<unsigned long>(c.x_den()));
    const std::size_t pieces = c.size() - 1;
    const Rational e1q = e1.to_rational(), e2q = e2.to_rational();
    const Rational half = make_rational(1, 2);

    // bound over x-range [xa, xb] (fixed-point numerators) with denominator min hmin
    auto range_bound = [&](std::uint64_t xa, std::uint64_t xb, std::uint64_t hmin) -> std::optional<BigFloat> {
        Rational a = make_rational(Integer(static_cast<unsigned long>(xa)), xden);
        Rational b = make_rational(Integer(static_cast<unsigned long>(xb)), xden);
        if (b <= e1q || a >= e2q)
            return std::nullopt;
        a = std::max(a, e1q);
        b = std::min(b, e2q);
        Rational g;
        if (b <= half)
            g = b * (1 - b);
        else if (a >= half)
            g = a * (1 - a);
        else
            g = make_rational(1, 4);
        BigFloat num = bf::pow(BigFloat(g, MPFR_RNDU, prec), alpha, MPFR_RNDU);
        BigFloat den(make_rational(Integer(static_cast<unsigned long>(hmin)), c.h_den()), MPFR_RNDD, prec);
        return bf::div(num, den, MPFR_RNDU);
    };

    const std::size_t nblocks = (pieces + block - 1) / block;
    struct Coarse {
        BigFloat bound;
        std::size_t id;
    };
    std::vector<Coarse> coarse;
    coarse.reserve(nblocks);
    for (std::size_t b = 0; b < nblocks; ++b) {
        std::size_t lo = b * block, hi = std::min(pieces, lo + block);
        std::uint64_t hmin = *std::min_element(c.hs.begin() + static_cast<std::ptrdiff_t>(lo),
                                               c.hs.begin() + static_cast<std::ptrdiff_t>(hi + 1));
        if (auto v = range_bound(c.xs[lo], c.xs[hi], hmin))
            coarse.push_back({*v, b});
    }
    std::sort(coarse.begin(), coarse.end(), [](const Coarse& p, const Coarse& q) {
        if (p.bound == q.bound)
            return p.id < q.id;
        return q.bound < p.bound;
    });
    BigFloat best(0L, prec);
    for (const auto& cb : coarse) {
        if (cb.bound <= best)
            break;
        ++out.refined_blocks;
        std::size_t lo = cb.id * block, hi = std::min(pieces, lo + block);
        for (std::size_t j = lo; j < hi; ++j)
            if (auto v = range_bound(c.xs[j], c.xs[j + 1], std::min(c.hs[j], c.hs[j + 1])))
                best = bf::max(best, *v);
    }
    out.middle = best;
    out.value = bf::max(out.middle, bf::max(out.left_tail, out.right_tail));
    return out;
}

// Floating dense-grid evaluation of the same sup; a lower estimate used as an oracle.
inline double c3_dense_estimate(const CandidateFunction& c, double alpha, double eps1, double eps2, std::size_t points)
{
    double best = 0;
    double lo = std::max(eps1, 1e-300), hi = 1.0 - eps2;
    for (std::size_t k = 1; k < points; ++k) {
        double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points);
        double h = c.evaluate(x);
        if (h > 0)
            best = std::max(best, std::pow(x * (1 - x), alpha) / h);
    }
    // the left tail peaks at eps1 when alpha < eta
    for (double x : {lo, 1.0 / static_cast<double>(c.grid_size)}) {
        double h = c.evaluate(x);
        if (h > 0 && x > 0)
            best = std::max(best, std::pow(x * (1 - x), alpha) / h);
    }
    return best;
}

struct ChainConstants {
    Rational mu;
    Rational sup_ratio;
    BigFloat pe;
    BigFloat rho1, alpha, delta, c3, eps1, eps2, rho, c1, c2, beta1;
    BigFloat log_eps1, log_eps2;

    // rho - alpha - 1/mu; zero up to rounding.
    BigFloat identity_residual() const
    {
        BigFloat inv_mu(Rational(1 / mu), MPFR_RNDN, rho.precision());
        return rho - alpha - inv_mu;
    }
};

// 2^(-1/mu) > s, decided exactly: s^p 2^q < 1 for mu = p/q.
inline bool hypothesis_holds(const Rational& sup_ratio, const Rational& mu)
{
    if (mu <= 0 || sup_ratio < 0)
        return false;
    // s < 2^(-1/mu)  <=>  s^p < 2^-q
    Integer p = mu.get_num(), q = mu.get_den();
    if (!p.fits_ulong_p() || !q.fits_ulong_p())
        throw std::domain_error("mu numerator/denominator too large");
    Rational lhs = pow_rat(sup_ratio, p.get_ui());
    return lhs * Rational(shifted_one(q.get_ui())) < 1;
}

inline ChainConstants chain_constants(const Rational& mu, const Rational& sup_ratio, const CandidateFunction& h,
                                           const BigFloat& pe)
{
    widen_exponent_range();
    if (mu <= 2)
        throw std::domain_error("the chain needs mu > 2");
    if (!hypothesis_holds(sup_ratio, mu))
        throw std::domain_error("hypothesis violated: sup ratio is not below 2^(-1/mu)");
    if (!(pe.sign() > 0) || !(pe < BigFloat(1L)))
        throw std::domain_error("p_e must lie in (0,1)");
    const mpfr_prec_t P = kChainBits;
    ChainConstants k;
    k.mu = mu;
    k.sup_ratio = sup_ratio;
    k.pe = pe;
    BigFloat one(1L, P), two(2L, P), half(0.5, P);
    BigFloat s(sup_ratio, MPFR_RNDU, P);
    // rounded so that 2^-rho1 >= s still holds
    k.rho1 = bf::min(half, -bf::log2(s, MPFR_RNDU));
    BigFloat a = bf::exp2(-BigFloat(Rational(1 / mu), MPFR_RNDN, P));
    BigFloat b = bf::exp2(-k.rho1);
    BigFloat d = a - b;
    k.alpha = bf::log2(one + d / (a + b));
    EpsRoots e = solve_eps(k.alpha, k.rho1);
    k.eps1 = e.eps1;
    k.eps2 = e.eps2;
    k.log_eps1 = e.log_eps1;
    k.log_eps2 = e.log_eps2;
    k.c3 = compute_c3(h, k.alpha, e).value;
    BigFloat sqrt2 = bf::sqrt2(P);
    k.delta = d / (two * sqrt2 * k.c3 + d);
    k.rho = -bf::log2(b + sqrt2 * k.delta / (one - k.delta) * k.c3);
    k.c1 = one / k.delta;
    k.c2 = bf::sqrt(two * pe) + two * k.c1 * bf::pow(pe, -k.alpha);
    k.beta1 = bf::pow(k.c2, BigFloat(mu, MPFR_RNDN, P));
    return k;
}

// N <= beta1 / gap^mu
inline BigFloat blocklength_bound(const ChainConstants& k, const BigFloat& gap)
{
    if (!(gap.sign() > 0))
        throw std::domain_error("gap to capacity must be positive");
    return k.beta1 / bf::pow(gap, BigFloat(k.mu, MPFR_RNDN, k.beta1.precision()));
}

struct ExpectationRow {
    unsigned n = 0;
    BigFloat lhs; // rounded up
    BigFloat rhs; // rounded down
    bool holds = false;
};

struct ExpectationReport {
    Rational z0;
    std::vector<ExpectationRow> rows;
    bool all_hold() const
    {
        return std::all_of(rows.begin(), rows.end(), [](const ExpectationRow& r) { return r.holds; });
    }
};

// E[(Z_n(1-Z_n))^alpha] <= (1/delta)(2^-rho1 + sqrt2 delta/(1-delta) c3)^n over the
// exact BEC process, for n = 0..n_max. The left side is enclosed from above and
// the right side from below, so a pass is rigorous for the stated constants.
inline ExpectationReport lemma_expectation_check(const Rational& z0, const ChainConstants& k, unsigned n_max,
                                                 mpfr_prec_t prec = 128)
{
    widen_exponent_range();
    if (n_max > kExactDepthCap)
        throw std::domain_error("lemma check depth exceeds the exact cap");
    std::vector<BigFloat> sums(n_max + 1, BigFloat(0L, prec));
    BigFloat alpha_lo = k.alpha; // (z(1-z))^alpha with z(1-z) <= 1/4 decreases in alpha
    std::vector<BigFloat> den_up, den_dn;
    {
        Integer den = z0.get_den();
        for (unsigned d = 0; d <= n_max; ++d) {
            den_up.emplace_back(den, MPFR_RNDU, prec);
            den_dn.emplace_back(den, MPFR_RNDD, prec);
            if (d < n_max)
                den *= den;
        }
    }
    for_each_node_bec_scaled(z0, n_max, [&](unsigned d, std::uint64_t, const Integer& num, const Integer& den) {
        if (num == 0 || num == den)
            return;
        // z and 1 - z each enclosed from above; 1 - z from the exact difference
        BigFloat z_up = bf::div(BigFloat(num, MPFR_RNDU, prec), den_dn[d], MPFR_RNDU);
        BigFloat w_up = bf::div(BigFloat(Integer(den - num), MPFR_RNDU, prec), den_dn[d], MPFR_RNDU);
        BigFloat g = bf::mul(z_up, w_up, MPFR_RNDU);
        BigFloat v = bf::pow(g, alpha_lo, MPFR_RNDU);
        mpfr_add(sums[d].raw(), sums[d].raw(), v.raw(), MPFR_RNDU);
    });
    const mpfr_prec_t P = std::max(prec, k.delta.precision());
    BigFloat unit(1L, P);
    BigFloat ratio = bf::div(k.delta, bf::sub(unit, k.delta, MPFR_RNDU), MPFR_RNDD);
    BigFloat base = bf::add(bf::exp2(-k.rho1, MPFR_RNDD),
                            bf::mul(bf::mul(bf::sqrt2(P, MPFR_RNDD), ratio, MPFR_RNDD), k.c3, MPFR_RNDD), MPFR_RNDD);
    BigFloat inv_delta = bf::div(unit, k.delta, MPFR_RNDD);
    ExpectationReport rep;
    rep.z0 = z0;
    for (unsigned n = 0; n <= n_max; ++n) {
        ExpectationRow row;
        row.n = n;
        row.lhs = sums[n];
        mpfr_div_2ui(row.lhs.raw(), row.lhs.raw(), n, MPFR_RNDU);
        BigFloat p = BigFloat::with_precision(P);
        mpfr_pow_ui(p.raw(), base.raw(), n, MPFR_RNDD);
        row.rhs = bf::mul(inv_delta, p, MPFR_RNDD);
        row.holds = row.lhs <= row.rhs;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

struct GapRow {
    unsigned n = 0;
    Rational fraction;  // exact P(Z_n <= pe 2^-n)
    BigFloat rhs;       // I(W) - c2 2^{-n(rho - alpha)}, rounded up
    bool vacuous = false;
    bool holds = false;
};

// Finite-n consequence of the expectation lemma, checked on the exact BEC process.
// pe is taken as the rational p_e (the chain's pe should be its rounding).
inline std::vector<GapRow> gap_lemma_check_bec(const Rational& z0, const ChainConstants& k, const Rational& pe,
                                               unsigned n_max)
{
    widen_exponent_range();
    std::vector<std::uint64_t> count(n_max + 1, 0);
    for_each_node_bec_scaled(z0, n_max, [&](unsigned d, std::uint64_t, const Integer& num, const Integer& den) {
        // num/den <= pe 2^-d  <=>  num 2^d pe_den <= pe_num den
        if (((num << d) * pe.get_den()) <= pe.get_num() * den)
            ++count[d];
    });
    std::vector<GapRow> rows;
    const mpfr_prec_t P = k.c2.precision();
    BigFloat cap(Rational(1 - z0), MPFR_RNDU, P);
    for (unsigned n = 0; n <= n_max; ++n) {
        GapRow r;
        r.n = n;
        r.fraction = make_rational(Integer(static_cast<unsigned long>(count[n])), shifted_one(n));
        BigFloat expo = bf::mul(BigFloat(static_cast<long>(n), P), bf::sub(k.rho, k.alpha, MPFR_RNDU), MPFR_RNDU);
        BigFloat term = bf::mul(k.c2, bf::exp2(-expo, MPFR_RNDD), MPFR_RNDD);
        r.rhs = bf::sub(cap, term, MPFR_RNDU);
        r.vacuous = r.rhs.sign() <= 0;
        r.holds = BigFloat(r.fraction, MPFR_RNDD, P) >= r.rhs;
        rows.push_back(std::move(r));
    }
    return rows;
}

// Polynomial decay variant: alpha reduced by the factor 1 + nu, delta kept.
struct GapExponentBound {
    BigFloat nu;
    BigFloat alpha_nu;   // alpha / (1 + nu)
    BigFloat c4;         // sqrt2 + 2 c1
    BigFloat gap_exponent; // rho - (nu + 1) alpha_nu
    BigFloat beta2;      // c4^mu

    BigFloat pe_bound(const BigFloat& n) const { return bf::pow(n, -nu); }
    BigFloat blocklength_bound(const BigFloat& gap, const Rational& mu) const
    {
        return beta2 / bf::pow(gap, BigFloat(mu, MPFR_RNDN, beta2.precision()));
    }
};

inline GapExponentBound gap_exponent_bound(const BigFloat& nu, const ChainConstants& k)
{
    if (!(nu.sign() > 0))
        throw std::domain_error("nu must be positive");
    const mpfr_prec_t P = k.alpha.precision();
    BigFloat one(1L, P), two(2L, P);
    GapExponentBound r;
    r.nu = nu;
    r.alpha_nu = k.alpha / (one + nu);
    r.c4 = bf::sqrt2(P) + two * k.c1;
    r.gap_exponent = k.rho - (nu + one) * r.alpha_nu;
    r.beta2 = bf::pow(r.c4, BigFloat(k.mu, MPFR_RNDN, P));
    return r;
}

// (1-x)^4 (2 + 8x + 3x^2 + 4x^3 - 4x^4 - 4x^5 - x^6), the polynomial form of
// 1 - x sqrt(2 - x^2) <= (1 - x)^(4/3).
inline Rational y2_polynomial(const Rational& x)
{
    static const long c[] = {2, 8, 3, 4, -4, -4, -1};
    Rational q = 0, p = 1;
    for (long v : c) {
        q += v * p;
        p *= x;
    }
    Rational one_minus = 1 - x;
    return pow_rat(one_minus, 4) * q;
}

struct Y2Report {
    std::size_t grid_points = 0;
    std::size_t negative_points = 0;
    std::size_t subintervals = 0;
    bool bracket_positive = false; // the degree-6 factor certified > 0 on [0,1]
    bool ok() const { return negative_points == 0 && bracket_positive; }
};

inline Y2Report check_inequality_y2(std::size_t grid = 10000)
{
    if (grid < 1)
        throw std::domain_error("grid must be positive");
    Y2Report r;
    for (std::size_t j = 0; j <= grid; ++j) {
        ++r.grid_points;
        if (y2_polynomial(make_rational(static_cast<long>(j), static_cast<long>(grid))) < 0)
            ++r.negative_points;
    }
    // On [a,b] with a >= 0: sum c_k x^k >= sum_{c_k>0} c_k a^k + sum_{c_k<0} c_k b^k.
    static const long c[] = {2, 8, 3, 4, -4, -4, -1};
    r.bracket_positive = true;
    for (std::size_t j = 0; j < grid; ++j) {
        Rational a = make_rational(static_cast<long>(j), static_cast<long>(grid));
        Rational b = make_rational(static_cast<long>(j + 1), static_cast<long>(grid));
        Rational lo = 0, pa = 1, pb = 1;
        for (long v : c) {
            lo += v > 0 ? v * pa : v * pb;
            pa *= a;
            pb *= b;
        }
        ++r.subintervals;
        if (lo <= 0)
            r.bracket_positive = false;
    }
    return r;
}

struct ConcavityReport {
    std::size_t triples = 0;
    std::size_t violations = 0;
    bool ok() const { return violations == 0; }
};

// Midpoint test t(x_{j+1}) >= (t(x_j) + t(x_{j+2}))/2 on the grid j/grid.
inline ConcavityReport t_concavity_check(const BigFloat& alpha, std::size_t grid = 10000, mpfr_prec_t prec = 192)
{
    std::vector<BigFloat> tv;
    tv.reserve(grid + 1);
    for (std::size_t j = 0; j <= grid; ++j)
        tv.push_back(t_function(alpha, BigFloat(make_rational(static_cast<long>(j), static_cast<long>(grid)), MPFR_RNDN, prec)));
    ConcavityReport r;
    BigFloat two(2L, prec);
    for (std::size_t j = 0; j + 2 <= grid; ++j) {
        ++r.triples;
        if (tv[j + 1] < (tv[j] + tv[j + 2]) / two)
            ++r.violations;
    }
    return r;
}

} // namespace polarscale
