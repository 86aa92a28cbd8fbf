#pragma once

// Exact Bhattacharyya arithmetic for the erasure channel, interval bounds for
// general binary memoryless symmetric channels, polar code construction and the
// union bound.

#include "rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <type_traits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace polarscale {

inline constexpr unsigned kExactDepthCap = 20;

inline void require_unit(const Rational& z, const char* what)
{
    if (z < 0 || z > 1)
        throw std::domain_error(std::string(what) + " must lie in [0,1], got " + to_string(z));
}

struct ChannelParam {
    Rational z;

    ChannelParam() = default;
    explicit ChannelParam(Rational v) : z(std::move(v)) { require_unit(z, "channel parameter"); }
};

struct PolarPair {
    Rational worse;
    Rational better;
};

inline Rational bec_worse(const Rational& z) { return 2 * z - z * z; }
inline Rational bec_better(const Rational& z) { return z * z; }

inline PolarPair polar_transform_bec(const Rational& z)
{
    require_unit(z, "erasure probability");
    return {bec_worse(z), bec_better(z)};
}

struct BhattacharyyaInterval {
    Rational lo;
    Rational hi;

    BhattacharyyaInterval() = default;
    BhattacharyyaInterval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h))
    {
        require_unit(lo, "interval lower end");
        require_unit(hi, "interval upper end");
        if (lo > hi)
            throw std::domain_error("interval with lo > hi");
    }
    static BhattacharyyaInterval point(const Rational& z) { return {z, z}; }

    bool contains(const Rational& z) const { return lo <= z && z <= hi; }
    bool contains(const BhattacharyyaInterval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool degenerate() const { return lo == hi; }
};

struct IntervalPair {
    BhattacharyyaInterval worse;
    BhattacharyyaInterval better;
};

// Rational lower bound on z*sqrt(2 - z^2), exact when the root is rational.
inline Rational sqrt_transform_lower(const Rational& z, unsigned long bits = 128)
{
    const Integer& a = z.get_num();
    const Integer& b = z.get_den();
    // z sqrt(2-z^2) = a sqrt(2b^2 - a^2) / b^2
    Integer rad = 2 * b * b - a * a;
    Integer r = isqrt_floor(rad);
    if (r * r == rad)
        return make_rational(a * r, b * b);
    Integer scaled = isqrt_floor(rad << (2 * bits));
    return make_rational(a * scaled, (b * b) << bits);
}

inline IntervalPair polar_transform_bmsc(const BhattacharyyaInterval& iv, unsigned long bits = 128)
{
    BhattacharyyaInterval better(iv.lo * iv.lo, iv.hi * iv.hi);
    BhattacharyyaInterval worse(sqrt_transform_lower(iv.lo, bits), bec_worse(iv.hi));
    return {worse, better};
}

struct SyntheticIndex {
    unsigned n = 0;
    std::vector<std::uint8_t> bits; // b_1 .. b_n, b_1 most significant

    SyntheticIndex() = default;
    explicit SyntheticIndex(std::vector<std::uint8_t> b) : n(static_cast<unsigned>(b.size())), bits(std::move(b))
    {
        for (auto v : bits)
            if (v > 1)
                throw std::domain_error("synthetic index bits must be 0 or 1");
    }

    // i is 1-based: bits encode i-1.
    static SyntheticIndex from_index(unsigned depth, std::uint64_t i)
    {
        if (depth > 63)
            throw std::domain_error("synthetic index depth too large");
        if (i < 1 || i > (std::uint64_t{1} << depth))
            throw std::domain_error("synthetic index out of range");
        std::vector<std::uint8_t> b(depth);
        std::uint64_t v = i - 1;
        for (unsigned k = 0; k < depth; ++k)
            b[depth - 1 - k] = static_cast<std::uint8_t>((v >> k) & 1u);
        return SyntheticIndex(std::move(b));
    }

    std::uint64_t index() const
    {
        std::uint64_t v = 0;
        for (auto b : bits)
            v = (v << 1) | b;
        return v + 1;
    }

    std::string bit_string() const
    {
        std::string s;
        for (auto b : bits)
            s.push_back(b ? '1' : '0');
        return s;
    }
};

inline Rational synthetic_bhattacharyya_bec(const Rational& z0, const SyntheticIndex& idx)
{
    require_unit(z0, "erasure probability");
    if (idx.n > kExactDepthCap)
        throw std::domain_error("exact evaluation depth cap exceeded; use synthetic_bhattacharyya_bec_enclosure");
    Rational z = z0;
    for (auto b : idx.bits)
        z = b ? bec_better(z) : bec_worse(z);
    return z;
}

// Dyadic enclosure for deep indices: both maps are increasing on [0,1], so
// rounding the endpoints outward after every step keeps the true value inside.
inline BhattacharyyaInterval synthetic_bhattacharyya_bec_enclosure(const Rational& z0, const SyntheticIndex& idx,
                                                                   unsigned long bits = 128)
{
    require_unit(z0, "erasure probability");
    Rational lo = z0, hi = z0;
    for (auto b : idx.bits) {
        lo = round_down_dyadic(b ? bec_better(lo) : bec_worse(lo), bits);
        hi = round_up_dyadic(b ? bec_better(hi) : bec_worse(hi), bits);
        if (hi > 1)
            hi = 1;
    }
    return {lo, hi};
}

// Depth-first walk over the polarization tree; visit(depth, i, z) is called for
// every node, where i is the 1-based index within its depth. Only one root-to-leaf
// path is held in memory.
template <class Visit>
void for_each_node_bec(const Rational& z0, unsigned n, Visit&& visit)
{
    require_unit(z0, "erasure probability");
    if (n > kExactDepthCap)
        throw std::domain_error("exact enumeration depth cap exceeded");
    std::vector<Rational> stack(n + 1);
    stack[0] = z0;
    auto rec = [&](auto&& self, unsigned d, std::uint64_t i) -> void {
        visit(d, i, static_cast<const Rational&>(stack[d]));
        if (d == n)
            return;
        stack[d + 1] = bec_worse(stack[d]);
        self(self, d + 1, 2 * i - 1);
        stack[d + 1] = bec_better(stack[d]);
        self(self, d + 1, 2 * i);
    };
    rec(rec, 0, 1);
}

// Same walk without gcd reduction: visit(depth, i, num, den) with z = num/den and
// den = den(z0)^(2^depth). Much faster at depth >= 12 where the integers are long.
template <class Visit>
void for_each_node_bec_scaled(const Rational& z0, unsigned n, Visit&& visit)
{
    require_unit(z0, "erasure probability");
    if (n > kExactDepthCap)
        throw std::domain_error("exact enumeration depth cap exceeded");
    std::vector<Integer> num(n + 1), den(n + 1);
    num[0] = z0.get_num();
    den[0] = z0.get_den();
    for (unsigned d = 1; d <= n; ++d)
        den[d] = den[d - 1] * den[d - 1];
    auto rec = [&](auto&& self, unsigned d, std::uint64_t i) -> void {
        visit(d, i, static_cast<const Integer&>(num[d]), static_cast<const Integer&>(den[d]));
        if (d == n)
            return;
        num[d + 1] = num[d] * (2 * den[d] - num[d]);
        self(self, d + 1, 2 * i - 1);
        num[d + 1] = num[d] * num[d];
        self(self, d + 1, 2 * i);
    };
    rec(rec, 0, 1);
}

// visit(i, z) for the 2^n leaves in index order.
template <class Visit>
void for_each_synthetic_bec(const Rational& z0, unsigned n, Visit&& visit)
{
    for_each_node_bec(z0, n, [&](unsigned d, std::uint64_t i, const Rational& z) {
        if (d == n)
            visit(i, z);
    });
}

inline std::vector<Rational> synthetic_values_bec(const Rational& z0, unsigned n)
{
    std::vector<Rational> out;
    out.reserve(std::size_t{1} << n);
    for_each_synthetic_bec(z0, n, [&](std::uint64_t, const Rational& z) { out.push_back(z); });
    return out;
}

// Mean of f over all 2^n synthetic values. f may return Rational (exact) or any
// type with += and division by an integer-constructed value of the same type.
template <class F>
auto exact_expectation_bec(const Rational& z0, unsigned n, F&& f, unsigned cap = kExactDepthCap)
{
    if (n > cap)
        throw std::domain_error("exact expectation depth cap exceeded");
    using T = std::decay_t<decltype(f(z0))>;
    T acc{};
    bool first = true;
    for_each_synthetic_bec(z0, n, [&](std::uint64_t, const Rational& z) {
        if (first) {
            acc = f(z);
            first = false;
        } else {
            acc += f(z);
        }
    });
    if constexpr (std::is_same_v<T, Rational>) {
        return make_rational(acc.get_num(), acc.get_den() << n);
    } else if constexpr (std::is_floating_point_v<T>) {
        return T(std::ldexp(acc, -static_cast<int>(n)));
    } else {
        return T(acc / T(Rational(shifted_one(n))));
    }
}

struct PolarCode {
    unsigned n = 0;
    ChannelParam design;
    std::vector<std::uint64_t> info_set; // sorted, 1-based

    std::uint64_t length() const { return std::uint64_t{1} << n; }
    Rational rate() const { return make_rational(Integer(static_cast<unsigned long>(info_set.size())), Integer(static_cast<unsigned long>(length()))); }
    bool contains(std::uint64_t i) const { return std::binary_search(info_set.begin(), info_set.end(), i); }
};

inline PolarCode make_code(unsigned n, const Rational& design, std::vector<std::uint64_t> info)
{
    std::sort(info.begin(), info.end());
    info.erase(std::unique(info.begin(), info.end()), info.end());
    for (auto i : info)
        if (i < 1 || i > (std::uint64_t{1} << n))
            throw std::domain_error("information index out of range");
    PolarCode c;
    c.n = n;
    c.design = ChannelParam(design);
    c.info_set = std::move(info);
    return c;
}

// The k indices with the smallest Z at the design parameter; ties go to the smaller index.
inline PolarCode construct_polar_code(const Rational& z0, unsigned n, std::uint64_t k)
{
    if (n > kExactDepthCap)
        throw std::domain_error("construction depth cap exceeded");
    std::uint64_t len = std::uint64_t{1} << n;
    if (k > len)
        throw std::domain_error("information bit count exceeds block length");
    std::vector<Rational> z = synthetic_values_bec(z0, n);
    std::vector<std::uint64_t> order(len);
    std::iota(order.begin(), order.end(), std::uint64_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) { return z[a] < z[b]; });
    std::vector<std::uint64_t> info(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    for (auto& i : info)
        ++i;
    return make_code(n, z0, std::move(info));
}

inline Rational union_bound_pe(const PolarCode& code, const Rational& z)
{
    require_unit(z, "erasure probability");
    Rational sum = 0;
    if (code.info_set.empty())
        return sum;
    for_each_synthetic_bec(z, code.n, [&](std::uint64_t i, const Rational& v) {
        if (code.contains(i))
            sum += v;
    });
    return sum;
}

inline Rational union_bound_pe(const PolarCode& code) { return union_bound_pe(code, code.design.z); }

struct CapacityBounds {
    Rational lo;            // 1 - z
    Rational hi;            // >= sqrt(1 - z^2)
    bool exact_for_bec = true; // for the BEC the capacity equals lo exactly
};

inline CapacityBounds capacity_bhattacharyya_bounds(const Rational& z, unsigned long bits = 128)
{
    require_unit(z, "Bhattacharyya parameter");
    Rational r = 1 - z * z;
    const Integer& a = r.get_num();
    const Integer& b = r.get_den();
    // sqrt(a/b) = sqrt(a b) / b
    Integer ab = a * b;
    Integer s = isqrt_floor(ab);
    Rational hi;
    if (s * s == ab)
        hi = make_rational(s, b);
    else
        hi = make_rational(isqrt_ceil(ab << (2 * bits)), b << bits);
    return {1 - z, hi, true};
}

// CSV columns: index,bits,z_exact_num,z_exact_den,z_float
inline void write_synthetic_csv(std::ostream& os, const Rational& z0, unsigned n)
{
    os << "index,bits,z_exact_num,z_exact_den,z_float\n";
    for_each_synthetic_bec(z0, n, [&](std::uint64_t i, const Rational& z) {
        os << i << ',' << SyntheticIndex::from_index(n, i).bit_string() << ',' << z.get_num().get_str() << ','
           << z.get_den().get_str() << ',' << to_decimal(z, 17) << '\n';
    });
}

} // namespace polarscale
