#pragma once

// Monte Carlo SC decoding on the BEC. For erasures, SC failure on bit i is
// exactly "synthetic channel i is erased", so decoding reduces to pushing
// erasure indicators through the butterfly.

#include "parallel.hpp"
#include "polar_core.hpp"
#include "rational.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace polarscale {

inline constexpr const char* kGeneratorId = "splitmix64-counter";

// Output k of the splitmix64 stream started at seed, computed directly.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t k)
{
    std::uint64_t z = seed + (k + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Erasure flags of all 2^n synthetic channels, in index order (1-based index
// i sits at position i-1). Modifies the pattern in place.
inline void propagate_erasures(std::vector<std::uint8_t>& e)
{
    const std::size_t len = e.size();
    if (len == 0 || (len & (len - 1)) != 0)
        throw std::invalid_argument("erasure pattern length must be a power of two");
    std::vector<std::uint8_t> out(len);
    for (std::size_t size = len; size > 1; size /= 2) {
        const std::size_t half = size / 2;
        for (std::size_t g = 0; g < len; g += size)
            for (std::size_t k = 0; k < half; ++k) {
                std::uint8_t a = e[g + 2 * k], b = e[g + 2 * k + 1];
                out[g + k] = a | b;
                out[g + half + k] = a & b;
            }
        e.swap(out);
    }
}

inline bool sc_erasure_propagate(std::vector<std::uint8_t> pattern, const PolarCode& code)
{
    if (pattern.size() != code.length())
        throw std::invalid_argument("erasure pattern length does not match the code");
    propagate_erasures(pattern);
    for (auto i : code.info_set)
        if (pattern[i - 1])
            return false;
    return true;
}

struct WilsonInterval {
    double lo = 0, hi = 0;
};

inline WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054)
{
    if (trials == 0)
        throw std::invalid_argument("wilson interval needs trials > 0");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1 + z2 / n;
    const double centre = (p + z2 / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    // the endpoints are exact at the extremes
    return {successes == 0 ? 0.0 : std::max(0.0, centre - half), successes == trials ? 1.0 : std::min(1.0, centre + half)};
}

struct SimConfig {
    PolarCode code;
    Rational z;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct SimResult {
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    double estimate = 0;
    WilsonInterval ci;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> bit_failures; // per synthetic channel, index order
};

namespace detail {

// Erased iff the 64-bit draw is below floor(z 2^64); z = 1 erases always.
struct ErasureThreshold {
    bool always = false;
    std::uint64_t t = 0;
    explicit ErasureThreshold(const Rational& z)
    {
        if (z == 1) {
            always = true;
            return;
        }
        Integer v = floor_div(z.get_num() << 64, z.get_den());
        mpz_export(&t, nullptr, 1, sizeof t, 0, 0, v.get_mpz_t());
        if (v == 0)
            t = 0;
    }
    bool erased(std::uint64_t r) const { return always || r < t; }
};

} // namespace detail

// Trial k uses stream positions k*2^n .. k*2^n + 2^n - 1, so results do not
// depend on the thread count.
inline SimResult simulate(const SimConfig& cfg)
{
    require_unit(cfg.z, "erasure probability");
    if (cfg.trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    const std::uint64_t len = cfg.code.length();
    const detail::ErasureThreshold thr(cfg.z);
    const unsigned threads = std::max(1u, cfg.threads);
    const std::uint64_t chunks = std::min<std::uint64_t>(cfg.trials, 64);
    std::vector<std::uint64_t> errs(chunks, 0);
    std::vector<std::vector<std::uint64_t>> bits(chunks, std::vector<std::uint64_t>(len, 0));
    parallel_for(0, chunks, threads, [&](std::size_t c0, std::size_t c1) {
        std::vector<std::uint8_t> e(len);
        for (std::size_t c = c0; c < c1; ++c) {
            const std::uint64_t t0 = cfg.trials * c / chunks, t1 = cfg.trials * (c + 1) / chunks;
            for (std::uint64_t t = t0; t < t1; ++t) {
                for (std::uint64_t j = 0; j < len; ++j)
                    e[j] = thr.erased(splitmix64_at(cfg.seed, t * len + j));
                propagate_erasures(e);
                bool fail = false;
                for (std::uint64_t j = 0; j < len; ++j)
                    bits[c][j] += e[j];
                for (auto i : cfg.code.info_set)
                    fail = fail || e[i - 1];
                errs[c] += fail;
            }
        }
    });
    SimResult r;
    r.trials = cfg.trials;
    r.seed = cfg.seed;
    r.bit_failures.assign(len, 0);
    for (std::uint64_t c = 0; c < chunks; ++c) {
        r.errors += errs[c];
        for (std::uint64_t j = 0; j < len; ++j)
            r.bit_failures[j] += bits[c][j];
    }
    r.estimate = static_cast<double>(r.errors) / static_cast<double>(r.trials);
    r.ci = wilson_interval(r.errors, r.trials);
    return r;
}

} // namespace polarscale
