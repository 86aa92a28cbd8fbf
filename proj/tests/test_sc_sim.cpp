#include <polarscale/sc_sim.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace polarscale;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }

} // namespace

TEST(Propagate, TruthTable)
{
    // n = 1, pattern (1, 0): minus erased, plus not
    auto code = make_code(1, q(1, 2), {2});
    EXPECT_TRUE(sc_erasure_propagate({1, 0}, code));
    EXPECT_FALSE(sc_erasure_propagate({1, 0}, make_code(1, q(1, 2), {1})));
    EXPECT_FALSE(sc_erasure_propagate({1, 1}, code));
    EXPECT_TRUE(sc_erasure_propagate({0, 0}, make_code(1, q(1, 2), {1, 2})));
}

TEST(Propagate, AllZeroAndAllOne)
{
    auto code = construct_polar_code(q(1, 2), 4, 8);
    EXPECT_TRUE(sc_erasure_propagate(std::vector<std::uint8_t>(16, 0), code));
    EXPECT_FALSE(sc_erasure_propagate(std::vector<std::uint8_t>(16, 1), code));
    EXPECT_THROW(sc_erasure_propagate(std::vector<std::uint8_t>(8, 0), code), std::invalid_argument);
}

TEST(Propagate, SingleErasureHitsOnlyAllMinusIndex)
{
    // minus is erased when either input is, plus only when both are, so one
    // erased channel use reaches index 1 alone
    std::vector<std::uint8_t> e{0, 0, 1, 0};
    propagate_erasures(e);
    EXPECT_EQ(e, (std::vector<std::uint8_t>{1, 0, 0, 0}));
    std::vector<std::uint8_t> f{1, 1, 1, 1};
    propagate_erasures(f);
    EXPECT_EQ(f, (std::vector<std::uint8_t>{1, 1, 1, 1}));
}

TEST(Propagate, ErasureCountMatchesExactProbabilities)
{
    // averaging the indicator over all 2^N patterns weighted by z gives Z_n^(i) exactly
    const unsigned n = 3;
    const std::size_t len = 8;
    Rational z = q(1, 3);
    std::vector<Rational> acc(len, 0);
    for (unsigned mask = 0; mask < (1u << len); ++mask) {
        std::vector<std::uint8_t> e(len);
        Rational w = 1;
        for (std::size_t j = 0; j < len; ++j) {
            e[j] = (mask >> j) & 1u;
            w *= e[j] ? z : 1 - z;
        }
        propagate_erasures(e);
        for (std::size_t j = 0; j < len; ++j)
            if (e[j])
                acc[j] += w;
    }
    auto exact = synthetic_values_bec(z, n);
    for (std::size_t j = 0; j < len; ++j)
        EXPECT_EQ(acc[j], exact[j]) << j;
}

TEST(Wilson, Interval)
{
    auto w = wilson_interval(0, 100);
    EXPECT_EQ(w.lo, 0.0);
    EXPECT_GT(w.hi, 0.0);
    auto h = wilson_interval(50, 100);
    EXPECT_NEAR(h.lo + h.hi, 1.0, 1e-12);
    // 50/100: 0.40383153 .. 0.59616847
    EXPECT_NEAR(h.lo, 0.40383153, 1e-7);
    EXPECT_THROW(wilson_interval(0, 0), std::invalid_argument);
}

TEST(Simulate, Extremes)
{
    auto code = construct_polar_code(q(1, 2), 4, 4);
    EXPECT_EQ(simulate({code, q(0), 1000, 1}).errors, 0u);
    EXPECT_EQ(simulate({code, q(1), 1000, 1}).errors, 1000u);
    EXPECT_THROW(simulate({code, q(1, 2), 0, 1}), std::invalid_argument);
}

TEST(Simulate, SingleBitMatchesExact)
{
    auto code = make_code(2, q(1, 2), {4});
    auto r = simulate({code, q(1, 2), 100000, 12345});
    EXPECT_LE(r.ci.lo, 1.0 / 16);
    EXPECT_GE(r.ci.hi, 1.0 / 16);
    EXPECT_DOUBLE_EQ(r.estimate, static_cast<double>(r.errors) / 100000.0);
}

TEST(Simulate, DeterministicAndThreadIndependent)
{
    auto code = construct_polar_code(q(1, 2), 6, 20);
    SimConfig c{code, q(2, 5), 20000, 99, 1};
    auto a = simulate(c);
    auto b = simulate(c);
    c.threads = 4;
    auto d = simulate(c);
    EXPECT_EQ(a.errors, b.errors);
    EXPECT_EQ(a.bit_failures, b.bit_failures);
    EXPECT_EQ(a.errors, d.errors);
    EXPECT_EQ(a.bit_failures, d.bit_failures);
    c.seed = 100;
    EXPECT_NE(simulate(c).bit_failures, a.bit_failures);
}

TEST(Simulate, BelowUnionBoundAndPerBitConvergence)
{
    for (unsigned n : {4u, 6u}) {
        auto code = construct_polar_code(q(1, 2), n, (std::uint64_t{1} << n) / 4);
        for (auto z : {q(1, 4), q(2, 5), q(1, 2)}) {
            auto r = simulate({code, z, 50000, 7});
            double half = (r.ci.hi - r.ci.lo) / 2;
            EXPECT_LE(r.estimate, to_double(union_bound_pe(code, z)) + half);
            // per-bit frequencies within 5 standard deviations (plus one count) of Z_n^(i)
            auto exact = synthetic_values_bec(z, n);
            const double t = static_cast<double>(r.trials);
            for (std::size_t i = 0; i < exact.size(); ++i) {
                double p = to_double(exact[i]);
                double f = static_cast<double>(r.bit_failures[i]) / t;
                EXPECT_LE(std::abs(f - p), 5 * std::sqrt(p * (1 - p) / t) + 1 / t) << n << ' ' << i;
            }
        }
    }
}

TEST(Generator, KnownOutputs)
{
    // first splitmix64 output for seed 0 (reference value of the published generator)
    EXPECT_EQ(splitmix64_at(0, 0), 0xE220A8397B1DCDAFULL);
    EXPECT_NE(splitmix64_at(0, 1), splitmix64_at(0, 0));
}
