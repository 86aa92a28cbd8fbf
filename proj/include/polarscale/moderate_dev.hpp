#pragma once

// Moderate-deviations trade-off: for gamma in (1/(1+mu), 1)
//   P_e <= N 2^(-N^(gamma h2inv((gamma(mu+1)-1)/(gamma mu)))),  N <= beta3 / gap^(mu/(1-gamma))
// plus the proof constants and the binomial tail step, checked exactly at small n.

#include "bigfloat.hpp"
#include "polar_core.hpp"
#include "rational.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace polarscale {

inline double h2(double x)
{
    if (!(x >= 0 && x <= 1))
        throw std::domain_error("h2 needs x in [0,1]");
    if (x == 0 || x == 1)
        return 0.0;
    return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

// Inverse of h2 restricted to [0, 1/2], by bisection.
inline double h2_inv(double y, double tol = 1e-12)
{
    if (!(y >= 0 && y <= 1))
        throw std::domain_error("h2_inv needs y in [0,1]");
    if (y == 0)
        return 0.0;
    if (y == 1)
        return 0.5;
    double lo = 0, hi = 0.5;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (h2(mid) < y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct TradeoffPoint {
    double gamma = 0;
    double mu = 0;
    double entropy_arg = 0; // (gamma(mu+1)-1)/(gamma mu)
    double pe_exponent = 0; // gamma h2inv(entropy_arg)
    double gap_exponent = 0; // mu / (1 - gamma)
};

inline double tradeoff_lower_gamma(double mu) { return 1.0 / (1.0 + mu); }

inline TradeoffPoint tradeoff_point(double gamma, double mu)
{
    if (!(mu > 0))
        throw std::domain_error("mu must be positive");
    if (!(gamma > tradeoff_lower_gamma(mu) && gamma < 1))
        throw std::domain_error("gamma must lie in (1/(1+mu), 1)");
    TradeoffPoint p;
    p.gamma = gamma;
    p.mu = mu;
    p.entropy_arg = (gamma * (mu + 1) - 1) / (gamma * mu);
    p.pe_exponent = gamma * h2_inv(p.entropy_arg);
    p.gap_exponent = mu / (1 - gamma);
    return p;
}

// Shortest text that reads back to the same double.
inline std::string shortest(double v)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline void write_tradeoff_csv(std::ostream& os, const std::vector<TradeoffPoint>& pts)
{
    os << "gamma,pe_exponent,gap_exponent\n";
    for (const auto& p : pts)
        os << shortest(p.gamma) << ',' << shortest(p.pe_exponent) << ',' << shortest(p.gap_exponent) << '\n';
}

struct JointConstants {
    BigFloat c5, c6, c7, beta3;
};

inline JointConstants joint_constants(const BigFloat& delta, const Rational& mu)
{
    widen_exponent_range();
    if (!(delta.sign() > 0) || !(delta < BigFloat(1L, delta.precision())))
        throw std::domain_error("delta must lie in (0,1)");
    const mpfr_prec_t P = std::max<mpfr_prec_t>(delta.precision(), 128);
    BigFloat one(1L, P), two(2L, P);
    BigFloat s2 = bf::sqrt2(P);
    JointConstants k;
    k.c5 = s2 + two / delta;
    BigFloat d = s2 - one;
    k.c6 = two / (d * d);
    k.c7 = one + s2 * (k.c5 + k.c6 * s2 / bf::ln2(P));
    k.beta3 = bf::pow(k.c7, BigFloat(mu, MPFR_RNDN, P));
    return k;
}

struct BinomialTailRow {
    unsigned n1 = 0;
    Rational eps;
    std::uint64_t kmax = 0; // floor(n1 eps)
    Rational tail;          // exact sum_{k <= kmax} C(n1,k) / 2^n1
    BigFloat bound;         // 2^(-n1 (1 - h2(eps))), rounded down
    bool holds = false;
};

// Exact binomial tail against the entropy bound. The bound is enclosed from
// below, so a pass is rigorous.
inline BinomialTailRow binomial_tail_check(unsigned n1, const Rational& eps, mpfr_prec_t prec = 128)
{
    if (n1 < 1 || n1 > 62)
        throw std::domain_error("n1 must lie in [1, 62]");
    if (eps < 0 || eps > make_rational(1, 2))
        throw std::domain_error("eps must lie in [0, 1/2]");
    BinomialTailRow r;
    r.n1 = n1;
    r.eps = eps;
    r.kmax = floor_div(eps.get_num() * n1, eps.get_den()).get_ui();
    Integer sum = 0, c = 1;
    for (std::uint64_t k = 0; k <= r.kmax; ++k) {
        sum += c;
        c = c * (n1 - k) / (k + 1);
    }
    r.tail = make_rational(sum, shifted_one(n1));
    // h2(eps) from above: -e log2 e - (1-e) log2(1-e), each term rounded up
    BigFloat h(0L, prec);
    if (eps != 0 && eps != 1) {
        Rational om = 1 - eps;
        BigFloat t1 = bf::mul(BigFloat(eps, MPFR_RNDU, prec), -bf::log2(BigFloat(eps, MPFR_RNDD, prec), MPFR_RNDD), MPFR_RNDU);
        BigFloat t2 = bf::mul(BigFloat(om, MPFR_RNDU, prec), -bf::log2(BigFloat(om, MPFR_RNDD, prec), MPFR_RNDD), MPFR_RNDU);
        h = bf::add(t1, t2, MPFR_RNDU);
    }
    // exponent -n1 (1 - h) rounded down
    BigFloat one(1L, prec);
    BigFloat expo = bf::mul(BigFloat(static_cast<long>(n1), prec), bf::sub(one, h, MPFR_RNDU), MPFR_RNDU);
    r.bound = bf::exp2(-expo, MPFR_RNDD);
    r.holds = BigFloat(r.tail, MPFR_RNDU, prec) <= r.bound;
    return r;
}

struct BinomialSweep {
    std::size_t checked = 0;
    std::vector<BinomialTailRow> failures;
    bool ok() const { return failures.empty(); }
};

// All n1 in [1, n1_max] and eps in {1/20, 2/20, ..., 9/20}.
inline BinomialSweep binomial_tail_sweep(unsigned n1_max = 30)
{
    BinomialSweep s;
    for (unsigned n1 = 1; n1 <= n1_max; ++n1)
        for (long e = 1; e <= 9; ++e) {
            auto r = binomial_tail_check(n1, make_rational(e, 20));
            ++s.checked;
            if (!r.holds)
                s.failures.push_back(r);
        }
    return s;
}

// Exponent structure of the Z(W)-dependent bound P_e <= N Z^((1/2) N^pe_exponent).
// The constants beta4, c8, c9 have no closed form and are not computed.
struct ZDependentExponents {
    TradeoffPoint point;
    double z_exponent(double n_blocklength) const { return 0.5 * std::pow(n_blocklength, point.pe_exponent); }
    static constexpr const char* constants_note = "beta4, c8, c9: not specified in closed form";
};

inline ZDependentExponents z_dependent_exponents(double gamma, double mu) { return {tradeoff_point(gamma, mu)}; }

struct JointBoundCheck {
    unsigned n = 0, n0 = 0, n1 = 0;
    double gamma = 0, mu = 0;
    double threshold_log2 = 0;   // Z <= 2^-T with T = 2^(n gamma eps)
    Rational lhs;                // exact fraction of synthetic channels below the threshold
    std::uint64_t undecided = 0; // leaves whose comparison stayed within rounding (counted as above)
    BigFloat rhs;                // I - c7 2^(-n (1-gamma)/mu), rounded up
    bool vacuous = false;
    bool holds = false;
};

// Compares the exact BEC fraction P(Z_n <= 2^(-2^(n gamma eps))) with
// I(W) - c7 2^(-n(1-gamma)/mu).
inline JointBoundCheck joint_bound_check_bec(const Rational& z0, unsigned n, double gamma, double mu,
                                             const JointConstants& jc)
{
    widen_exponent_range();
    TradeoffPoint tp = tradeoff_point(gamma, mu);
    JointBoundCheck r;
    r.n = n;
    r.gamma = gamma;
    r.mu = mu;
    r.n1 = static_cast<unsigned>(std::ceil(gamma * n));
    r.n0 = n - r.n1;
    const mpfr_prec_t P = 192;
    // T = 2^(n gamma eps); the decision log2 z <= -T uses enclosures of both sides.
    BigFloat t_expo(static_cast<double>(n) * tp.pe_exponent, P);
    BigFloat T = bf::exp2(t_expo);
    r.threshold_log2 = -T.to_double();
    std::uint64_t below = 0;
    for_each_node_bec_scaled(z0, n, [&](unsigned d, std::uint64_t, const Integer& num, const Integer& den) {
        if (d != n)
            return;
        if (num == 0) {
            ++below;
            return;
        }
        BigFloat l_hi = bf::sub(bf::log2(BigFloat(num, MPFR_RNDU, P), MPFR_RNDU), bf::log2(BigFloat(den, MPFR_RNDD, P), MPFR_RNDD),
                                MPFR_RNDU);
        BigFloat l_lo = bf::sub(bf::log2(BigFloat(num, MPFR_RNDD, P), MPFR_RNDD), bf::log2(BigFloat(den, MPFR_RNDU, P), MPFR_RNDU),
                                MPFR_RNDD);
        BigFloat neg_t = -T;
        if (l_hi <= neg_t)
            ++below;
        else if (!(l_lo > neg_t))
            ++r.undecided;
    });
    r.lhs = make_rational(Integer(static_cast<unsigned long>(below)), shifted_one(n));
    BigFloat cap(Rational(1 - z0), MPFR_RNDU, P);
    BigFloat e = BigFloat(static_cast<double>(n) * (1 - gamma) / mu, P);
    BigFloat term = bf::mul(jc.c7, bf::exp2(-e, MPFR_RNDD), MPFR_RNDD);
    r.rhs = bf::sub(cap, term, MPFR_RNDU);
    r.vacuous = r.rhs.sign() <= 0;
    r.holds = BigFloat(r.lhs, MPFR_RNDD, P) >= r.rhs;
    return r;
}

} // namespace polarscale
