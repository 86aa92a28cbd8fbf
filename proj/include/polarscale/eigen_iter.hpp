#pragma once

// Sampled power iteration for the polarization operators
//   T_BEC  g(x) = (g(x^2) + g(2x - x^2)) / 2
//   T_BMSC g(x) = (g(x^2) + max_{y in [x sqrt(2-x^2), 2x - x^2]} g(y)) / 2
// on the uniform grid x_i = i/N. Off-grid values use linear interpolation; the
// BMSC inner max runs over the M+1 points y_ij = x sqrt(2-x^2) + (j/M)(2x-x^2 - x sqrt(2-x^2)).
// Floating point throughout: this part is heuristic, only certify is exact.

#include "parallel.hpp"
#include "rational.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polarscale {

enum class ChannelOperator { bec, bmsc };

inline std::string_view to_string(ChannelOperator op) { return op == ChannelOperator::bec ? "bec" : "bmsc"; }

inline ChannelOperator parse_operator(std::string_view s)
{
    if (s == "bec" || s == "BEC")
        return ChannelOperator::bec;
    if (s == "bmsc" || s == "BMSC")
        return ChannelOperator::bmsc;
    throw std::invalid_argument("unknown operator '" + std::string(s) + "' (expected bec or bmsc)");
}

template <std::floating_point T = double>
class SampledFunction {
public:
    SampledFunction() = default;
    explicit SampledFunction(std::vector<T> samples) : s_(std::move(samples))
    {
        if (s_.size() < 3)
            throw std::domain_error("sampled function needs at least 3 samples");
        for (T v : s_)
            if (!std::isfinite(v) || v < 0)
                throw std::domain_error("sampled function values must be finite and nonnegative");
    }

    std::size_t grid_size() const { return s_.size() - 1; }
    const std::vector<T>& samples() const { return s_; }
    T operator[](std::size_t i) const { return s_[i]; }
    T grid_point(std::size_t i) const { return static_cast<T>(i) / static_cast<T>(grid_size()); }

    // Linear interpolation at x in [0,1] (clamped).
    T operator()(T x) const { return at_position(x * static_cast<T>(grid_size())); }

    // Interpolation at grid coordinate p = x N.
    T at_position(T p) const
    {
        const std::size_t n = grid_size();
        if (!(p > 0))
            return s_[0];
        std::size_t k = static_cast<std::size_t>(p);
        if (k >= n)
            return s_[n];
        T f = p - static_cast<T>(k);
        return s_[k] + f * (s_[k + 1] - s_[k]);
    }

    // Interpolation at the rational grid coordinate num/den, the integer part taken exactly.
    T at_ratio(std::uint64_t num, std::uint64_t den) const
    {
        std::uint64_t k = num / den, r = num % den;
        if (k >= grid_size())
            return s_[grid_size()];
        T f = static_cast<T>(r) / static_cast<T>(den);
        return s_[k] + f * (s_[k + 1] - s_[k]);
    }

    T max_value() const { return *std::max_element(s_.begin(), s_.end()); }

private:
    std::vector<T> s_;
};

struct IterationConfig {
    std::size_t grid_size = 1000;   // N_s
    std::size_t inner_size = 100;   // M_s
    std::size_t steps = 100;        // k
    Rational init_exponent = make_rational(3, 4);
    ChannelOperator op = ChannelOperator::bmsc;
    unsigned threads = 1;

    void validate() const
    {
        if (grid_size < 2)
            throw std::domain_error("grid size must be at least 2");
        if (grid_size > (std::size_t{1} << 31))
            throw std::domain_error("grid size too large");
        if (inner_size < 1)
            throw std::domain_error("inner grid size must be at least 1");
        if (steps < 1)
            throw std::domain_error("iteration count must be at least 1");
        if (init_exponent <= 0 || init_exponent >= 1)
            throw std::domain_error("initial exponent must lie in (0,1)");
    }
};

template <std::floating_point T = double>
std::vector<T> inner_y_grid(T x, std::size_t m)
{
    T a = x * std::sqrt(T(2) - x * x);
    T b = T(2) * x - x * x;
    std::vector<T> y(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
        T w = static_cast<T>(j) / static_cast<T>(m);
        y[j] = a * (T(1) - w) + b * w;
    }
    return y;
}

template <std::floating_point T = double>
SampledFunction<T> initial_function(std::size_t n, const Rational& exponent)
{
    T e = static_cast<T>(to_double(exponent));
    std::vector<T> s(n + 1, T(0));
    for (std::size_t i = 1; i < n; ++i) {
        T x = static_cast<T>(i) / static_cast<T>(n);
        s[i] = std::pow(x * (T(1) - x), e);
    }
    T m = *std::max_element(s.begin(), s.end());
    for (auto& v : s)
        v /= m;
    return SampledFunction<T>(std::move(s));
}

// f_hat(x_i) for all i, before normalization.
template <std::floating_point T = double>
std::vector<T> apply_unnormalized(const SampledFunction<T>& h, ChannelOperator op, std::size_t inner, unsigned threads = 1)
{
    const std::size_t n = h.grid_size();
    const std::uint64_t nn = n;
    std::vector<T> out(n + 1, T(0));
    const T inv_n = T(1) / static_cast<T>(n);
    parallel_for(0, n + 1, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const std::uint64_t ii = i;
            // x^2 and 2x - x^2 in grid units are i^2/N and (2iN - i^2)/N.
            T plus = h.at_ratio(ii * ii, nn);
            T upper_end = h.at_ratio(2 * ii * nn - ii * ii, nn);
            T minus;
            if (op == ChannelOperator::bec) {
                minus = upper_end;
            } else {
                T x = static_cast<T>(i) * inv_n;
                T a = x * std::sqrt(T(2) - x * x) * static_cast<T>(n);
                T b = static_cast<T>(2 * ii * nn - ii * ii) * inv_n;
                minus = std::max(h.at_position(a), upper_end);
                const T inv_m = T(1) / static_cast<T>(inner);
                for (std::size_t j = 1; j < inner; ++j) {
                    T w = static_cast<T>(j) * inv_m;
                    minus = std::max(minus, h.at_position(a * (T(1) - w) + b * w));
                }
            }
            out[i] = (plus + minus) / T(2);
        }
    });
    return out;
}

template <std::floating_point T = double>
SampledFunction<T> normalize(std::vector<T> f)
{
    T m = *std::max_element(f.begin(), f.end());
    if (!(m > 0))
        throw std::domain_error("cannot normalize an all-zero function");
    for (auto& v : f)
        v /= m;
    return SampledFunction<T>(std::move(f));
}

template <std::floating_point T = double>
SampledFunction<T> apply_operator(const SampledFunction<T>& h, const IterationConfig& cfg)
{
    cfg.validate();
    return normalize(apply_unnormalized(h, cfg.op, cfg.inner_size, cfg.threads));
}

// max over interior i of f(x_i) / h(x_i), where f = T h (unnormalized).
template <std::floating_point T = double>
T ratio_max(const SampledFunction<T>& h, const std::vector<T>& f)
{
    T r = 0;
    for (std::size_t i = 1; i < h.grid_size(); ++i) {
        if (!(h[i] > 0))
            throw std::domain_error("interior sample is zero; ratio undefined at x = " + std::to_string(i) + "/N");
        r = std::max(r, f[i] / h[i]);
    }
    return r;
}

template <std::floating_point T = double>
T rhat(const SampledFunction<T>& h, ChannelOperator op, std::size_t inner, unsigned threads = 1)
{
    return ratio_max(h, apply_unnormalized(h, op, inner, threads));
}

template <std::floating_point T = double>
struct IterationResult {
    SampledFunction<T> h;
    std::vector<T> rhat; // rhat[k-1] belongs to h_k, k = 1..steps
};

template <std::floating_point T = double>
IterationResult<T> iterate_from(SampledFunction<T> h, const IterationConfig& cfg,
                                const std::function<void(std::size_t, T)>& progress = {})
{
    cfg.validate();
    if (h.grid_size() != cfg.grid_size)
        throw std::domain_error("start function grid does not match configuration");
    IterationResult<T> res;
    res.rhat.reserve(cfg.steps);
    for (std::size_t s = 0; s <= cfg.steps; ++s) {
        std::vector<T> f = apply_unnormalized(h, cfg.op, cfg.inner_size, cfg.threads);
        if (s >= 1) {
            res.rhat.push_back(ratio_max(h, f));
            if (progress)
                progress(s, res.rhat.back());
        }
        if (s < cfg.steps)
            h = normalize(std::move(f));
    }
    res.h = std::move(h);
    return res;
}

// Runs cfg.steps normalized applications starting from (x(1-x))^e. The ratio for
// h_k needs T h_k, so steps+1 operator applications are performed in total.
template <std::floating_point T = double>
IterationResult<T> iterate(const IterationConfig& cfg, const std::function<void(std::size_t, T)>& progress = {})
{
    cfg.validate();
    SampledFunction<T> h = initial_function<T>(cfg.grid_size, cfg.init_exponent);
    return iterate_from(h, cfg, progress);
}

template <std::floating_point T>
void write_trace_csv(std::ostream& os, const std::vector<T>& trace)
{
    os << "k,rhat\n";
    os.precision(17);
    for (std::size_t k = 0; k < trace.size(); ++k)
        os << k + 1 << ',' << static_cast<double>(trace[k]) << '\n';
}

template <std::floating_point T>
void write_samples_csv(std::ostream& os, const SampledFunction<T>& h)
{
    os << "x,h\n";
    os.precision(17);
    for (std::size_t i = 0; i <= h.grid_size(); ++i)
        os << static_cast<double>(h.grid_point(i)) << ',' << static_cast<double>(h[i]) << '\n';
}

} // namespace polarscale
