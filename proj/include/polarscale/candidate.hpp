#pragma once

// Candidate eigenfunction h on [0,1] built from iterated samples:
//   h = b0 on [0, 1/N),  b0(x) = J0 (x N / mbar)^eta
//   h = b1 on (1 - 1/N, 1],  b1(x) = J1 ((1 - x) N / mbar)^eta
//   h = linear interpolation of the breakpoints (x'_j, h_j) on [1/N, 1 - 1/N].
// Breakpoints sample b0 on [1/N, mbar/N], the iterated function on
// [mbar/N, 1 - mbar/N] and b1 on [1 - mbar/N, 1 - 1/N], refined until adjacent
// values differ by at most a factor 1 + delta_s.
//
// Everything is fixed point: x'_j = X_j / (N 2^sub_bits), h_j = H_j / 2^value_bits,
// J0 = h at mbar/N and J1 = h at 1 - mbar/N (both breakpoint values).
// Tail samples are rounded down, so breakpoints never exceed b0 / b1.

#include "eigen_iter.hpp"
#include "power_bound.hpp"
#include "rational.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace polarscale {

using u128 = unsigned __int128;
using i128 = __int128;

inline Integer to_integer(u128 v)
{
    Integer hi(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64)));
    Integer lo(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
    return (hi << 64) + lo;
}

inline u128 to_u128(const Integer& v)
{
    if (v < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 128)
        throw std::overflow_error("integer does not fit in 128 bits");
    Integer hi = v >> 64;
    Integer lo = v - (hi << 64);
    return (static_cast<u128>(hi.get_ui()) << 64) | static_cast<u128>(lo.get_ui());
}

struct CandidateParams {
    Rational eta = make_rational(78, 100);
    std::uint64_t mbar = 13;
    Rational delta_s = make_rational(1, 10000);
    unsigned sub_bits = 16;       // x resolution: 2^-sub_bits of a grid cell
    unsigned value_bits = 53;     // h values are multiples of 2^-value_bits
    unsigned long tail_bits = 64; // precision of the power enclosures used for tail samples

    void validate(std::uint64_t grid) const
    {
        if (eta <= 0 || eta >= 1)
            throw std::domain_error("eta must lie in (0,1)");
        if (delta_s <= 0)
            throw std::domain_error("delta_s must be positive");
        if (!delta_s.get_num().fits_ulong_p() || !delta_s.get_den().fits_ulong_p())
            throw std::domain_error("delta_s numerator and denominator must fit in 64 bits");
        if (mbar < 2)
            throw std::domain_error("mbar must be at least 2");
        if (2 * mbar >= grid)
            throw std::domain_error("grid too small for the chosen mbar");
        if (sub_bits > 24 || value_bits > 60 || value_bits < 8)
            throw std::domain_error("unsupported fixed-point resolution");
        // interpolation products must stay inside 128 bits
        if (std::bit_width(grid) + 2 * sub_bits > 62)
            throw std::domain_error("grid too large for the fixed-point layout");
    }
};

class CandidateFunction {
public:
    std::uint64_t grid_size = 0; // N_s
    std::uint64_t mbar = 0;
    Rational eta;
    Rational delta_s;
    unsigned sub_bits = 16;
    unsigned value_bits = 53;
    std::uint64_t junction0 = 0; // H at x = mbar/N
    std::uint64_t junction1 = 0; // H at x = 1 - mbar/N
    std::vector<std::uint64_t> xs;
    std::vector<std::uint64_t> hs;

    std::uint64_t cell() const { return std::uint64_t{1} << sub_bits; }
    std::uint64_t x_den() const { return grid_size << sub_bits; }
    Integer h_den() const { return shifted_one(value_bits); }
    std::size_t size() const { return xs.size(); }

    Rational x(std::size_t j) const { return make_rational(Integer(static_cast<unsigned long>(xs[j])), Integer(static_cast<unsigned long>(x_den()))); }
    Rational h(std::size_t j) const { return make_rational(Integer(static_cast<unsigned long>(hs[j])), h_den()); }

    // b0(x) = b0_coeff() (x N / mbar)^eta, b1(x) = b1_coeff() ((1-x) N / mbar)^eta
    Rational b0_coeff() const { return make_rational(Integer(static_cast<unsigned long>(junction0)), h_den()); }
    Rational b1_coeff() const { return make_rational(Integer(static_cast<unsigned long>(junction1)), h_den()); }

    // t = x N / mbar for the left tail; x given as num / den.
    Rational left_t(const Integer& num, const Integer& den) const
    {
        return make_rational(num * Integer(static_cast<unsigned long>(grid_size)), den * Integer(static_cast<unsigned long>(mbar)));
    }
    Rational right_t(const Integer& num, const Integer& den) const
    {
        return make_rational((den - num) * Integer(static_cast<unsigned long>(grid_size)), den * Integer(static_cast<unsigned long>(mbar)));
    }

    // Enclosures of the tails in value units (multiples of 2^-value_bits).
    Integer tail_value(std::uint64_t junction, const Rational& t, Rounding dir, unsigned long bits = 64) const
    {
        Rational p = rational_power_bound(t, eta, dir, bits);
        Integer num = Integer(static_cast<unsigned long>(junction)) * p.get_num();
        return dir == Rounding::up ? ceil_div(num, p.get_den()) : floor_div(num, p.get_den());
    }

    // Floating evaluation, for diagnostics and plotting only.
    double evaluate(double xv) const
    {
        double n = static_cast<double>(grid_size), m = static_cast<double>(mbar), e = to_double(eta);
        double scale = std::ldexp(1.0, -static_cast<int>(value_bits));
        if (xv <= 0 || xv >= 1)
            return 0.0;
        if (xv < 1.0 / n)
            return static_cast<double>(junction0) * scale * std::pow(xv * n / m, e);
        if (xv > 1.0 - 1.0 / n)
            return static_cast<double>(junction1) * scale * std::pow((1.0 - xv) * n / m, e);
        double X = xv * static_cast<double>(x_den());
        auto it = std::upper_bound(xs.begin(), xs.end(), static_cast<std::uint64_t>(X));
        std::size_t j = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
        if (j + 1 >= xs.size())
            return static_cast<double>(hs.back()) * scale;
        double f = (X - static_cast<double>(xs[j])) / static_cast<double>(xs[j + 1] - xs[j]);
        f = std::clamp(f, 0.0, 1.0);
        return (static_cast<double>(hs[j]) + f * (static_cast<double>(hs[j + 1]) - static_cast<double>(hs[j]))) * scale;
    }

    void validate() const
    {
        if (xs.size() != hs.size() || xs.size() < 2)
            throw std::domain_error("candidate needs matching breakpoint and value lists");
        for (std::size_t j = 1; j < xs.size(); ++j)
            if (xs[j] <= xs[j - 1])
                throw std::domain_error("candidate breakpoints must increase strictly");
        if (xs.front() != cell() || xs.back() != x_den() - cell())
            throw std::domain_error("candidate breakpoints must span [1/N, 1 - 1/N]");
        for (std::size_t j = 1; j < xs.size(); ++j)
            if (xs[j] - xs[j - 1] > cell())
                throw std::domain_error("candidate breakpoint gap exceeds one grid cell");
    }
};

namespace detail {

inline bool within_ratio(std::uint64_t a, std::uint64_t b, std::uint64_t dn, std::uint64_t dd)
{
    std::uint64_t lo = std::min(a, b), hi = std::max(a, b);
    return static_cast<u128>(hi) * dd <= static_cast<u128>(lo) * (static_cast<u128>(dd) + dn);
}

} // namespace detail

// Does every adjacent pair satisfy max <= (1 + delta_s) min?
inline bool adjacency_holds(const CandidateFunction& c)
{
    std::uint64_t dn = c.delta_s.get_num().get_ui(), dd = c.delta_s.get_den().get_ui();
    for (std::size_t j = 1; j < c.hs.size(); ++j)
        if (!detail::within_ratio(c.hs[j - 1], c.hs[j], dn, dd))
            return false;
    return true;
}

inline CandidateFunction build_candidate(const std::vector<double>& samples, const CandidateParams& p)
{
    if (samples.size() < 3)
        throw std::domain_error("too few samples");
    const std::uint64_t n = samples.size() - 1;
    p.validate(n);

    CandidateFunction c;
    c.grid_size = n;
    c.mbar = p.mbar;
    c.eta = p.eta;
    c.delta_s = p.delta_s;
    c.sub_bits = p.sub_bits;
    c.value_bits = p.value_bits;

    const std::uint64_t cell = c.cell();
    const double scale = std::ldexp(1.0, static_cast<int>(p.value_bits));
    std::vector<std::uint64_t> grid(n + 1, 0);
    for (std::uint64_t i = p.mbar; i <= n - p.mbar; ++i) {
        double v = samples[i];
        if (!std::isfinite(v) || v < 0 || v > 1)
            throw std::domain_error("samples must be normalized to [0,1]");
        grid[i] = static_cast<std::uint64_t>(std::llround(v * scale));
        if (grid[i] == 0)
            throw std::domain_error("sample at interior point " + std::to_string(i) + "/N rounds to zero");
    }
    c.junction0 = grid[p.mbar];
    c.junction1 = grid[n - p.mbar];

    const std::uint64_t dn = p.delta_s.get_num().get_ui(), dd = p.delta_s.get_den().get_ui();
    const Integer xden(static_cast<unsigned long>(c.x_den()));

    auto left_value = [&](std::uint64_t X) -> std::uint64_t {
        if (X == p.mbar * cell)
            return c.junction0;
        return c.tail_value(c.junction0, c.left_t(Integer(static_cast<unsigned long>(X)), xden), Rounding::down, p.tail_bits).get_ui();
    };
    auto right_value = [&](std::uint64_t X) -> std::uint64_t {
        if (X == (n - p.mbar) * cell)
            return c.junction1;
        return c.tail_value(c.junction1, c.right_t(Integer(static_cast<unsigned long>(X)), xden), Rounding::down, p.tail_bits).get_ui();
    };
    auto middle_value = [&](std::uint64_t X) -> std::uint64_t {
        std::uint64_t i = X / cell, k = X % cell;
        if (k == 0)
            return grid[i];
        i128 d = static_cast<i128>(grid[i + 1]) - static_cast<i128>(grid[i]);
        i128 v = static_cast<i128>(grid[i]) + ((d * static_cast<i128>(k) + (static_cast<i128>(cell) >> 1)) >> p.sub_bits);
        return static_cast<std::uint64_t>(v);
    };

    auto emit = [&](std::uint64_t X, std::uint64_t H) {
        if (H == 0)
            throw std::domain_error("candidate value rounds to zero at an interior breakpoint");
        c.xs.push_back(X);
        c.hs.push_back(H);
    };

    // Appends breakpoints in (xa, xb], bisecting until the ratio rule holds.
    auto refine = [&](auto&& self, std::uint64_t xa, std::uint64_t va, std::uint64_t xb, std::uint64_t vb,
                      auto&& value_at) -> void {
        if (detail::within_ratio(va, vb, dn, dd)) {
            emit(xb, vb);
            return;
        }
        if (xb - xa < 2)
            throw std::domain_error("cannot meet the adjacency ratio at the chosen x resolution");
        std::uint64_t xm = xa + (xb - xa) / 2;
        std::uint64_t vm = value_at(xm);
        self(self, xa, va, xm, vm, value_at);
        self(self, xm, vm, xb, vb, value_at);
    };

    auto sweep = [&](std::uint64_t i0, std::uint64_t i1, auto&& value_at) {
        std::uint64_t xa = i0 * cell, va = value_at(xa);
        for (std::uint64_t i = i0 + 1; i <= i1; ++i) {
            std::uint64_t xb = i * cell, vb = value_at(xb);
            refine(refine, xa, va, xb, vb, value_at);
            xa = xb;
            va = vb;
        }
    };

    emit(cell, left_value(cell));
    sweep(1, p.mbar, left_value);
    sweep(p.mbar, n - p.mbar, middle_value);
    sweep(n - p.mbar, n - 1, right_value);
    c.validate();
    return c;
}

template <std::floating_point T>
CandidateFunction build_candidate(const SampledFunction<T>& h, const CandidateParams& p)
{
    std::vector<double> s(h.samples().begin(), h.samples().end());
    return build_candidate(s, p);
}

// First line: '#' followed by a JSON header; then x_num,x_den,h_num,h_den rows.
// Fractions are written over the fixed denominators (not reduced).
inline void write_candidate_csv(std::ostream& os, const CandidateFunction& c)
{
    nlohmann::ordered_json hdr;
    hdr["eta"] = to_string(c.eta);
    hdr["mbar"] = c.mbar;
    hdr["delta_s"] = to_string(c.delta_s);
    hdr["N_s"] = c.grid_size;
    hdr["sub_bits"] = c.sub_bits;
    hdr["value_bits"] = c.value_bits;
    hdr["b0_coeff"] = to_string(c.b0_coeff());
    hdr["b1_coeff"] = to_string(c.b1_coeff());
    os << "# " << hdr.dump() << '\n';
    os << "x_num,x_den,h_num,h_den\n";
    const std::string xd = std::to_string(c.x_den());
    const std::string hd = c.h_den().get_str();
    for (std::size_t j = 0; j < c.size(); ++j)
        os << c.xs[j] << ',' << xd << ',' << c.hs[j] << ',' << hd << '\n';
}

inline CandidateFunction read_candidate_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line.size() < 2 || line[0] != '#')
        throw std::invalid_argument("candidate file lacks the JSON header line");
    auto hdr = nlohmann::json::parse(line.substr(1));
    CandidateFunction c;
    c.eta = parse_rational(hdr.at("eta").get<std::string>()).value;
    c.mbar = hdr.at("mbar").get<std::uint64_t>();
    c.delta_s = parse_rational(hdr.at("delta_s").get<std::string>()).value;
    c.grid_size = hdr.at("N_s").get<std::uint64_t>();
    c.sub_bits = hdr.at("sub_bits").get<unsigned>();
    c.value_bits = hdr.at("value_bits").get<unsigned>();
    CandidateParams p;
    p.eta = c.eta;
    p.mbar = c.mbar;
    p.delta_s = c.delta_s;
    p.sub_bits = c.sub_bits;
    p.value_bits = c.value_bits;
    p.validate(c.grid_size);
    if (!std::getline(is, line) || line.rfind("x_num,x_den,h_num,h_den", 0) != 0)
        throw std::invalid_argument("candidate file lacks the column header");
    const std::uint64_t xd = c.x_den();
    const Integer hd = c.h_den();
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string f[4];
        for (int k = 0; k < 4; ++k)
            if (!std::getline(ls, f[k], ','))
                throw std::invalid_argument("candidate row with fewer than 4 fields");
        if (std::stoull(f[1]) != xd || Integer(f[3], 10) != hd)
            throw std::invalid_argument("candidate row with unexpected denominator");
        c.xs.push_back(std::stoull(f[0]));
        c.hs.push_back(std::stoull(f[2]));
    }
    c.validate();
    auto find = [&](std::uint64_t X) {
        auto it = std::lower_bound(c.xs.begin(), c.xs.end(), X);
        if (it == c.xs.end() || *it != X)
            throw std::invalid_argument("candidate lacks a junction breakpoint");
        return c.hs[static_cast<std::size_t>(it - c.xs.begin())];
    };
    c.junction0 = find(c.mbar * c.cell());
    c.junction1 = find((c.grid_size - c.mbar) * c.cell());
    return c;
}

} // namespace polarscale
