#pragma once

// Error-floor results: Z_n^(i)(W) <= Z_n^(i)(W')^eta with eta = log Z(W) / log Z(W'),
// and the same for the union-bound sums over a fixed information set.
//
// Comparisons are done on logarithms. With A = -ln Z, B = -ln Z', a = -ln z,
// b = -ln z' (all >= 0), Z <= Z'^eta  <=>  A b >= a B. Both products are
// enclosed with directed rounding; a pass needs lower(A b) >= upper(a B).
// Exact equality (z == z', the all-ones path, or eta rational) is detected
// separately since no finite precision settles it.

#include "bigfloat.hpp"
#include "polar_core.hpp"
#include "power_bound.hpp"
#include "rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace polarscale {

enum class Verdict { holds, violated, undecided };

namespace detail {

struct LogEnclosure {
    BigFloat lo, hi; // enclosure of -ln(num/den), num/den in (0,1]
};

// -ln(num/den) for 0 < num <= den, accurate also when num/den is close to 1.
inline LogEnclosure neg_log(const Integer& num, const Integer& den, mpfr_prec_t prec)
{
    if (num <= 0 || num > den)
        throw std::domain_error("neg_log needs 0 < num <= den");
    LogEnclosure e{BigFloat::with_precision(prec), BigFloat::with_precision(prec)};
    if (num == den)
        return e;
    if (2 * num > den) {
        // -ln(1 - w), w = (den - num)/den
        Integer gap = den - num;
        BigFloat w_lo = bf::div(BigFloat(gap, MPFR_RNDD, prec), BigFloat(den, MPFR_RNDU, prec), MPFR_RNDD);
        BigFloat w_hi = bf::div(BigFloat(gap, MPFR_RNDU, prec), BigFloat(den, MPFR_RNDD, prec), MPFR_RNDU);
        e.lo = -bf::log1p(-w_lo, MPFR_RNDU);
        e.hi = -bf::log1p(-w_hi, MPFR_RNDD);
    } else {
        e.lo = bf::sub(bf::log(BigFloat(den, MPFR_RNDD, prec), MPFR_RNDD), bf::log(BigFloat(num, MPFR_RNDU, prec), MPFR_RNDU),
                       MPFR_RNDD);
        e.hi = bf::sub(bf::log(BigFloat(den, MPFR_RNDU, prec), MPFR_RNDU), bf::log(BigFloat(num, MPFR_RNDD, prec), MPFR_RNDD),
                       MPFR_RNDU);
    }
    return e;
}

inline LogEnclosure neg_log(const Rational& q, mpfr_prec_t prec) { return neg_log(q.get_num(), q.get_den(), prec); }

// Decides Z <= Z'^eta from the four log enclosures.
inline Verdict compare_logs(const LogEnclosure& A, const LogEnclosure& B, const LogEnclosure& a, const LogEnclosure& b)
{
    BigFloat lhs_lo = bf::mul(A.lo, b.lo, MPFR_RNDD), lhs_hi = bf::mul(A.hi, b.hi, MPFR_RNDU);
    BigFloat rhs_lo = bf::mul(a.lo, B.lo, MPFR_RNDD), rhs_hi = bf::mul(a.hi, B.hi, MPFR_RNDU);
    if (lhs_lo >= rhs_hi)
        return Verdict::holds;
    if (lhs_hi < rhs_lo)
        return Verdict::violated;
    return Verdict::undecided;
}

} // namespace detail

// eta = p/q exactly when z^q = z'^p for small p, q; found by trying q <= max_den.
inline std::optional<Rational> rational_eta(const Rational& z, const Rational& zp, unsigned max_den = 64)
{
    if (z <= 0 || zp <= 0 || z >= 1 || zp >= 1)
        return std::nullopt;
    double guess = std::log(to_double(z)) / std::log(to_double(zp));
    for (unsigned q = 1; q <= max_den; ++q) {
        long p = std::lround(guess * q);
        if (p <= 0)
            continue;
        if (pow_rat(z, q) == pow_rat(zp, static_cast<unsigned long>(p)))
            return make_rational(p, static_cast<long>(q));
    }
    return std::nullopt;
}

// Decides x <= y^(p/q) exactly, for rationals in [0,1].
inline bool power_le_exact(const Rational& x, const Rational& y, const Rational& eta)
{
    // x^q <= y^p
    unsigned long p = eta.get_num().get_ui(), q = eta.get_den().get_ui();
    return pow_rat(x, q) <= pow_rat(y, p);
}

// Decides Z <= Z'^eta for eta = log z / log z' (z, z' in (0,1)), given the
// exact values. Escalates precision before giving up.
inline Verdict floor_compare(const Integer& zn, const Integer& zd, const Integer& pn, const Integer& pd, const Rational& z,
                             const Rational& zp, const std::optional<Rational>& eta_exact)
{
    if (zn == 0)
        return Verdict::holds;
    if (pn == 0)
        return Verdict::violated; // Z > 0 = Z'^eta
    if (eta_exact) {
        return power_le_exact(make_rational(zn, zd), make_rational(pn, pd), *eta_exact) ? Verdict::holds
                                                                                         : Verdict::violated;
    }
    for (mpfr_prec_t prec : {128, 512, 2048}) {
        auto A = detail::neg_log(zn, zd, prec);
        auto B = detail::neg_log(pn, pd, prec);
        auto a = detail::neg_log(z, prec);
        auto b = detail::neg_log(zp, prec);
        Verdict v = detail::compare_logs(A, B, a, b);
        if (v != Verdict::undecided)
            return v;
    }
    return Verdict::undecided;
}

struct FloorReport {
    Rational z, zp;
    unsigned n_max = 0;
    std::uint64_t checked = 0;
    std::uint64_t equalities = 0; // decided by exact identity
    std::uint64_t violations = 0;
    std::uint64_t undecided = 0;
    bool ok() const { return violations == 0 && undecided == 0; }
};

// Paired walk over the two BEC processes; visit(depth, i, zn, zd, pn, pd).
template <class Visit>
void for_each_node_bec_pair(const Rational& z, const Rational& zp, unsigned n, Visit&& visit)
{
    require_unit(z, "erasure probability");
    require_unit(zp, "erasure probability");
    if (n > kExactDepthCap)
        throw std::domain_error("exact enumeration depth cap exceeded");
    std::vector<Integer> an(n + 1), ad(n + 1), bn(n + 1), bd(n + 1);
    an[0] = z.get_num();
    ad[0] = z.get_den();
    bn[0] = zp.get_num();
    bd[0] = zp.get_den();
    for (unsigned d = 1; d <= n; ++d) {
        ad[d] = ad[d - 1] * ad[d - 1];
        bd[d] = bd[d - 1] * bd[d - 1];
    }
    auto rec = [&](auto&& self, unsigned d, std::uint64_t i) -> void {
        visit(d, i, static_cast<const Integer&>(an[d]), static_cast<const Integer&>(ad[d]), static_cast<const Integer&>(bn[d]),
              static_cast<const Integer&>(bd[d]));
        if (d == n)
            return;
        an[d + 1] = an[d] * (2 * ad[d] - an[d]);
        bn[d + 1] = bn[d] * (2 * bd[d] - bn[d]);
        self(self, d + 1, 2 * i - 1);
        an[d + 1] = an[d] * an[d];
        bn[d + 1] = bn[d] * bn[d];
        self(self, d + 1, 2 * i);
    };
    rec(rec, 0, 1);
}

inline FloorReport verify_floor_bec(const Rational& z, const Rational& zp, unsigned n_max)
{
    widen_exponent_range();
    if (!(z > 0 && z <= zp && zp < 1))
        throw std::domain_error("floor check needs 0 < z <= z' < 1");
    if (n_max > 14)
        throw std::domain_error("exhaustive check limited to n <= 14");
    FloorReport r;
    r.z = z;
    r.zp = zp;
    r.n_max = n_max;
    const bool same = z == zp;
    const auto eta = same ? std::optional<Rational>{} : rational_eta(z, zp);
    for_each_node_bec_pair(z, zp, n_max, [&](unsigned d, std::uint64_t i, const Integer& zn, const Integer& zd, const Integer& pn,
                                             const Integer& pd) {
        ++r.checked;
        // all-ones path: Z = z^(2^d), Z' = z'^(2^d), equality for any eta
        if (same || i == (std::uint64_t{1} << d)) {
            ++r.equalities;
            return;
        }
        Verdict v = floor_compare(zn, zd, pn, pd, z, zp, eta);
        if (v == Verdict::violated)
            ++r.violations;
        else if (v == Verdict::undecided)
            ++r.undecided;
    });
    return r;
}

// Even-index identity: a bit string ending in 1 squares its parent exactly.
inline bool even_index_identity_bec(const Rational& z0, unsigned n)
{
    if (n < 1)
        return true;
    auto parent = synthetic_values_bec(z0, n - 1);
    auto child = synthetic_values_bec(z0, n);
    for (std::size_t j = 0; j < parent.size(); ++j)
        if (child[2 * j + 1] != parent[j] * parent[j])
            return false;
    return true;
}

struct CorollaryReport {
    Rational z, zp;
    unsigned n = 0;
    std::size_t info_size = 0;
    Rational pe_w;  // sum over the information set at z
    Rational pe_wp; // same set at z'
    Verdict verdict = Verdict::undecided;
    double log_margin = 0; // log2 of RHS / LHS, for display
};

inline std::vector<Rational> synthetic_values_bec_fast(const Rational& z0, unsigned n)
{
    std::vector<Rational> out(std::size_t{1} << n);
    for_each_node_bec_scaled(z0, n, [&](unsigned d, std::uint64_t i, const Integer& num, const Integer& den) {
        if (d == n)
            out[i - 1] = make_rational(num, den);
    });
    return out;
}

inline CorollaryReport verify_corollary_bec(const PolarCode& code, const Rational& z)
{
    widen_exponent_range();
    const Rational& zp = code.design.z;
    if (!(z > 0 && z <= zp && zp < 1))
        throw std::domain_error("corollary check needs 0 < z <= z' < 1");
    CorollaryReport r;
    r.z = z;
    r.zp = zp;
    r.n = code.n;
    r.info_size = code.info_set.size();
    auto vz = synthetic_values_bec_fast(z, code.n);
    auto vp = synthetic_values_bec_fast(zp, code.n);
    r.pe_w = 0;
    r.pe_wp = 0;
    for (auto i : code.info_set) {
        r.pe_w += vz[i - 1];
        r.pe_wp += vp[i - 1];
    }
    if (r.info_size == 0 || z == zp) {
        r.verdict = r.pe_w == r.pe_wp ? Verdict::holds : Verdict::violated;
        return r;
    }
    if (auto eta = rational_eta(z, zp)) {
        r.verdict = pow_rat(r.pe_w, eta->get_den().get_ui()) <= pow_rat(r.pe_wp, eta->get_num().get_ui()) ? Verdict::holds
                                                                                                              : Verdict::violated;
    } else {
        // ln P <= eta ln P' with eta = a/b (a = -ln z, b = -ln z'), i.e. b ln P <= a ln P'
        r.verdict = Verdict::undecided;
        for (mpfr_prec_t prec : {128, 512, 2048}) {
            auto a = detail::neg_log(z, prec);
            auto b = detail::neg_log(zp, prec);
            BigFloat lp_hi = bf::log(BigFloat(r.pe_w, MPFR_RNDU, prec), MPFR_RNDU);
            BigFloat lpp_lo = bf::log(BigFloat(r.pe_wp, MPFR_RNDD, prec), MPFR_RNDD);
            BigFloat lp_lo = bf::log(BigFloat(r.pe_w, MPFR_RNDD, prec), MPFR_RNDD);
            BigFloat lpp_hi = bf::log(BigFloat(r.pe_wp, MPFR_RNDU, prec), MPFR_RNDU);
            auto prod = [](const BigFloat& x_lo, const BigFloat& x_hi, const BigFloat& s_lo, const BigFloat& s_hi) {
                // s > 0; x any sign
                BigFloat lo = x_lo.sign() >= 0 ? bf::mul(x_lo, s_lo, MPFR_RNDD) : bf::mul(x_lo, s_hi, MPFR_RNDD);
                BigFloat hi = x_hi.sign() >= 0 ? bf::mul(x_hi, s_hi, MPFR_RNDU) : bf::mul(x_hi, s_lo, MPFR_RNDU);
                return std::make_pair(lo, hi);
            };
            auto [l_lo, l_hi] = prod(lp_lo, lp_hi, b.lo, b.hi);
            auto [q_lo, q_hi] = prod(lpp_lo, lpp_hi, a.lo, a.hi);
            if (l_hi <= q_lo) {
                r.verdict = Verdict::holds;
                break;
            }
            if (l_lo > q_hi) {
                r.verdict = Verdict::violated;
                break;
            }
        }
    }
    double eta_d = std::log(to_double(z)) / std::log(to_double(zp));
    BigFloat lw = bf::log2(BigFloat(r.pe_w, MPFR_RNDN, 128)), lwp = bf::log2(BigFloat(r.pe_wp, MPFR_RNDN, 128));
    r.log_margin = eta_d * lwp.to_double() - lw.to_double();
    return r;
}

struct BmscFloorReport {
    BhattacharyyaInterval z, zp;
    unsigned n_max = 0;
    std::uint64_t checked = 0;
    std::uint64_t not_established = 0; // comparison of the bounding chains fails
    std::uint64_t undecided = 0;
    bool ok() const { return not_established == 0 && undecided == 0; }
};

// General-BMSC version on interval enclosures: W follows the upper ends, W'
// the lower ends, eta is the largest value compatible with the intervals.
// Needs hi(z) <= lo(z')^2. A failed node is not a counterexample, only a
// comparison the bounding chains cannot settle. With a non-degenerate box the
// root already fails (lo(z')^eta_max < lo(z)), so only point inputs can pass.
inline BmscFloorReport verify_floor_bmsc_intervals(const BhattacharyyaInterval& zi, const BhattacharyyaInterval& zpi,
                                                         unsigned n_max)
{
    widen_exponent_range();
    if (!(zi.hi <= zpi.lo * zpi.lo))
        throw std::domain_error("interval check needs hi(Z(W)) <= lo(Z(W'))^2");
    if (!(zi.lo > 0 && zpi.hi < 1))
        throw std::domain_error("interval check needs Z(W) > 0 and Z(W') < 1");
    if (n_max > 12)
        throw std::domain_error("interval check limited to n <= 12");
    BmscFloorReport r;
    r.z = zi;
    r.zp = zpi;
    r.n_max = n_max;
    // eta_max = ln(lo z) / ln(hi z')
    const unsigned long base_bits =
        std::max<unsigned long>(mpz_sizeinbase(zpi.lo.get_den().get_mpz_t(), 2), 8) + 8;
    std::vector<Rational> up(n_max + 1), lo(n_max + 1);
    up[0] = zi.hi;
    lo[0] = zpi.lo;
    // Along the all-plus path both sides are powers 2^d of the roots, so the
    // root comparison decides every node there. Point intervals give equality.
    const bool points = zi.lo == zi.hi && zpi.lo == zpi.hi;
    std::optional<Verdict> plus_path;
    auto rec = [&](auto&& self, unsigned d, bool all_plus) -> void {
        ++r.checked;
        const Rational& u = up[d];
        const Rational& l = lo[d];
        Verdict v = Verdict::undecided;
        if (all_plus && points)
            v = Verdict::holds;
        else if (all_plus && plus_path)
            v = *plus_path;
        else if (u == 0)
            v = Verdict::holds;
        else if (l == 0)
            v = Verdict::violated;
        else {
            for (mpfr_prec_t prec : {128, 512, 2048}) {
                auto A = detail::neg_log(u, prec);
                auto B = detail::neg_log(l, prec);
                auto a = detail::neg_log(zi.lo, prec);
                auto b = detail::neg_log(zpi.hi, prec);
                v = detail::compare_logs(A, B, a, b);
                if (v != Verdict::undecided)
                    break;
            }
        }
        if (d == 0)
            plus_path = v;
        if (v == Verdict::violated)
            ++r.not_established;
        else if (v == Verdict::undecided)
            ++r.undecided;
        if (d == n_max)
            return;
        // enough bits to resolve 1 - lo near 1 at the next depth
        unsigned long bits = 64 + (base_bits << (d + 2));
        up[d + 1] = 2 * u - u * u;
        lo[d + 1] = sqrt_transform_lower(l, bits);
        self(self, d + 1, false);
        up[d + 1] = u * u;
        lo[d + 1] = l * l;
        self(self, d + 1, all_plus);
    };
    rec(rec, 0, true);
    return r;
}

struct InequalityGridResult {
    Rational eta;
    std::size_t points = 0;
    std::size_t holds = 0;
    std::size_t violated = 0;
    std::size_t undecided = 0;
    Rational first_violation = -1; // grid point, -1 if none
};

struct ProofInequalitiesReport {
    std::vector<InequalityGridResult> squared;     // 2 - x^eta <= (2 - x^2)^(eta/2)
    std::vector<InequalityGridResult> linear;      // 2 - x^eta <= (2 - x)^eta
    InequalityGridResult squared_counterexample;   // eta = 19/10, violations expected
    InequalityGridResult linear_counterexample;    // eta = 9/10, violations expected
    bool ok() const
    {
        for (const auto& v : {&squared, &linear})
            for (const auto& g : *v)
                if (g.violated || g.undecided)
                    return false;
        return squared_counterexample.violated > 0 && linear_counterexample.violated > 0;
    }
};

namespace detail {

// Decides 2 - x^eta <= base^e2 on rationals; base and e2 are rational.
inline Verdict ineq_decide(const Rational& x, const Rational& eta, const Rational& base, const Rational& e2)
{
    Rational px, pb;
    if (exact_rational_power(x, eta, px) && exact_rational_power(base, e2, pb))
        return 2 - px <= pb ? Verdict::holds : Verdict::violated;
    for (mpfr_prec_t prec : {128, 512}) {
        // rigorous dyadic enclosures of x^eta and base^e2
        Rational xl = rational_power_bound(x, eta, Rounding::down, prec);
        Rational xu = rational_power_bound(x, eta, Rounding::up, prec);
        Rational bl = rational_power_bound(base, e2, Rounding::down, prec);
        Rational bu = rational_power_bound(base, e2, Rounding::up, prec);
        if (2 - xl <= bl)
            return Verdict::holds;
        if (2 - xu > bu)
            return Verdict::violated;
    }
    return Verdict::undecided;
}

inline InequalityGridResult ineq_grid(const Rational& eta, bool squared, std::size_t grid)
{
    InequalityGridResult g;
    g.eta = eta;
    for (std::size_t j = 0; j <= grid; ++j) {
        Rational x = make_rational(static_cast<long>(j), static_cast<long>(grid));
        Verdict v = squared ? ineq_decide(x, eta, 2 - x * x, eta / 2) : ineq_decide(x, eta, 2 - x, eta);
        ++g.points;
        if (v == Verdict::holds)
            ++g.holds;
        else if (v == Verdict::violated) {
            if (g.violated++ == 0)
                g.first_violation = x;
        } else
            ++g.undecided;
    }
    return g;
}

} // namespace detail

inline ProofInequalitiesReport proof_inequalities_check(std::size_t grid = 10000)
{
    ProofInequalitiesReport r;
    for (auto e : {make_rational(2), make_rational(5, 2), make_rational(3)})
        r.squared.push_back(detail::ineq_grid(e, true, grid));
    for (auto e : {make_rational(1), make_rational(3, 2), make_rational(2), make_rational(3)})
        r.linear.push_back(detail::ineq_grid(e, false, grid));
    r.squared_counterexample = detail::ineq_grid(make_rational(19, 10), true, grid);
    r.linear_counterexample = detail::ineq_grid(make_rational(9, 10), false, grid);
    return r;
}

// Depth-1 search in the range Z(W) in (Z(W')^2, Z(W')] with W' degraded from W.
// W is a finite mixture of BSCs; W' is W followed by a BSC(q) and an erasure
// with probability e, so W > W' holds by construction. For such mixtures
// Z(W^-) is exact: the minus transform maps BSC(a), BSC(b) to BSC(a*b) with
// a*b = a(1-b) + b(1-a). Experimental: it reports what it finds.
struct BscMixture {
    std::vector<double> weight, p;

    BigFloat bhattacharyya(mpfr_prec_t prec) const
    {
        BigFloat z(0L, prec), one(1L, prec), two(2L, prec);
        for (std::size_t k = 0; k < p.size(); ++k) {
            BigFloat pk(p[k], prec);
            z = z + BigFloat(weight[k], prec) * two * bf::sqrt(pk * (one - pk));
        }
        return z;
    }
};

inline double bsc_conv(double a, double b) { return a * (1 - b) + b * (1 - a); }

inline BscMixture degrade(const BscMixture& w, double q, double e)
{
    BscMixture d;
    for (std::size_t k = 0; k < w.p.size(); ++k) {
        d.weight.push_back(w.weight[k] * (1 - e));
        d.p.push_back(bsc_conv(w.p[k], q));
    }
    if (e > 0) {
        d.weight.push_back(e);
        d.p.push_back(0.5);
    }
    return d;
}

inline BscMixture minus_transform(const BscMixture& w)
{
    BscMixture m;
    for (std::size_t a = 0; a < w.p.size(); ++a)
        for (std::size_t b = 0; b < w.p.size(); ++b) {
            m.weight.push_back(w.weight[a] * w.weight[b]);
            m.p.push_back(bsc_conv(w.p[a], w.p[b]));
        }
    return m;
}

struct DegradedPairHit {
    BscMixture w;
    double q = 0, e = 0;
    double z = 0, zp = 0;
    double lhs = 0; // Z(W^-)
    double rhs = 0; // Z(W'^-)^eta
};

struct DegradedPairReport {
    std::uint64_t trials = 0;
    std::uint64_t in_range = 0; // pairs with Z(W) in (Z(W')^2, Z(W')]
    std::vector<DegradedPairHit> hits;
};

inline DegradedPairReport degraded_pair_search(std::uint64_t trials = 200000, std::uint64_t seed = 1)
{
    constexpr mpfr_prec_t P = 128;
    std::mt19937_64 gen(seed);
    auto unit = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    DegradedPairReport r;
    r.trials = trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        BscMixture w;
        const std::size_t k = 1 + gen() % 3;
        double total = 0;
        for (std::size_t j = 0; j < k; ++j) {
            w.weight.push_back(unit());
            w.p.push_back(0.5 * unit());
            total += w.weight.back();
        }
        if (!(total > 0))
            continue;
        for (auto& x : w.weight)
            x /= total;
        const double q = unit() < 0.7 ? 0.2 * unit() : 0.0;
        const double e = unit() < 0.7 ? 0.5 * unit() : 0.0;
        BscMixture d = degrade(w, q, e);
        BigFloat z = w.bhattacharyya(P), zp = d.bhattacharyya(P);
        if (!(z.sign() > 0 && z <= zp && zp * zp < z && zp < BigFloat(1L, P)))
            continue;
        ++r.in_range;
        BigFloat eta = bf::log(z) / bf::log(zp);
        BigFloat lhs = minus_transform(w).bhattacharyya(P);
        BigFloat rhs = bf::pow(minus_transform(d).bhattacharyya(P), eta);
        // well clear of rounding at this precision
        if (lhs > rhs * BigFloat(1.0 + 1e-12, P))
            r.hits.push_back({w, q, e, z.to_double(), zp.to_double(), lhs.to_double(), rhs.to_double()});
    }
    return r;
}

struct SweepPoint {
    Rational z;
    Rational pe_tilde;
    double log_slope = 0; // slope to the previous grid point (0 for the first)
};

struct SweepReport {
    PolarCode code;
    std::vector<SweepPoint> points;
    double min_slope = 0;
    double reference_exponent = 0; // log2 P~(z') / log2 z'
    bool monotone = true;
};

// Exact P~(z) on a fixed code for each grid point, with log-log slopes between
// neighbours. The grid is sorted first.
inline SweepReport floor_sweep(const PolarCode& code, std::vector<Rational> grid)
{
    if (grid.empty())
        throw std::domain_error("floor sweep needs a nonempty grid");
    std::sort(grid.begin(), grid.end());
    for (const auto& z : grid)
        if (!(z > 0 && z <= code.design.z))
            throw std::domain_error("sweep grid must lie in (0, z']");
    SweepReport r;
    r.code = code;
    auto pe_at = [&](const Rational& z) {
        auto v = synthetic_values_bec_fast(z, code.n);
        Rational s = 0;
        for (auto i : code.info_set)
            s += v[i - 1];
        return s;
    };
    auto log2q = [](const Rational& q) { return bf::log2(BigFloat(q, MPFR_RNDN, 256)); };
    for (std::size_t k = 0; k < grid.size(); ++k) {
        SweepPoint p;
        p.z = grid[k];
        p.pe_tilde = pe_at(grid[k]);
        if (k > 0) {
            const auto& prev = r.points.back();
            if (p.pe_tilde < prev.pe_tilde)
                r.monotone = false;
            if (p.pe_tilde > 0 && prev.pe_tilde > 0)
                p.log_slope = ((log2q(p.pe_tilde) - log2q(prev.pe_tilde)) / (log2q(p.z) - log2q(prev.z))).to_double();
        }
        r.points.push_back(p);
    }
    r.min_slope = 0;
    bool first = true;
    for (std::size_t k = 1; k < r.points.size(); ++k) {
        if (first || r.points[k].log_slope < r.min_slope)
            r.min_slope = r.points[k].log_slope;
        first = false;
    }
    Rational pz = pe_at(code.design.z);
    if (pz > 0 && code.design.z < 1)
        r.reference_exponent = (log2q(pz) / log2q(code.design.z)).to_double();
    return r;
}

inline void write_sweep_csv(std::ostream& os, const SweepReport& r)
{
    os << "z,pe_tilde,log_slope\n";
    os.precision(17);
    for (const auto& p : r.points)
        os << to_double(p.z) << ',' << BigFloat(p.pe_tilde, MPFR_RNDN, 128).str(17) << ',' << p.log_slope << '\n';
}

} // namespace polarscale
