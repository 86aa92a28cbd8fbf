#include <polarscale/polar_core.hpp>
#include <polarscale/power_bound.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace polarscale;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }

} // namespace

TEST(Transform, BecPair)
{
    auto p = polar_transform_bec(q(1, 2));
    EXPECT_EQ(p.worse, q(3, 4));
    EXPECT_EQ(p.better, q(1, 4));
    auto e = polar_transform_bec(q(0));
    EXPECT_EQ(e.worse, 0);
    EXPECT_EQ(e.better, 0);
    auto o = polar_transform_bec(q(1));
    EXPECT_EQ(o.worse, 1);
    EXPECT_EQ(o.better, 1);
    EXPECT_THROW(polar_transform_bec(q(3, 2)), std::domain_error);
}

TEST(Transform, BmscIntervalEndpoints)
{
    // x sqrt(2 - x^2) at 1/2 is sqrt(7)/4 = 0.66143782776614764763 (mpmath)
    auto iv = polar_transform_bmsc(BhattacharyyaInterval::point(q(1, 2)));
    EXPECT_EQ(iv.worse.hi, q(3, 4));
    EXPECT_LE(iv.worse.lo, q(3, 4));
    EXPECT_NEAR(to_double(iv.worse.lo), 0.66143782776614764763, 1e-15);
    EXPECT_LE(iv.worse.lo * iv.worse.lo, q(7, 16));
    EXPECT_EQ(iv.better.lo, q(1, 4));
    EXPECT_EQ(iv.better.hi, q(1, 4));
}

TEST(Transform, SqrtLowerExactSquare)
{
    // 2b^2 - a^2 a perfect square: a/b = 1/1 -> sqrt(1) exactly
    EXPECT_EQ(sqrt_transform_lower(q(1)), q(1));
    EXPECT_EQ(sqrt_transform_lower(q(0)), q(0));
    // 7/13: 2*169 - 49 = 289 = 17^2, so the value is 7*17/169
    EXPECT_EQ(sqrt_transform_lower(q(7, 13)), q(119, 169));
}

TEST(Transform, IntervalContainsBecAndBscValues)
{
    // BEC(z) reaches 2z - z^2, BSC with Bhattacharyya z reaches z sqrt(2 - z^2)
    for (long k = 1; k < 20; ++k) {
        Rational z = q(k, 20);
        auto iv = polar_transform_bmsc(BhattacharyyaInterval::point(z));
        EXPECT_TRUE(iv.worse.contains(bec_worse(z)));
        double bsc = to_double(z) * std::sqrt(2 - to_double(z) * to_double(z));
        EXPECT_LE(to_double(iv.worse.lo), bsc + 1e-15);
        EXPECT_GE(to_double(iv.worse.lo), bsc - 1e-15);
    }
}

TEST(Synthetic, HandEnumerationDepthTwo)
{
    auto v = synthetic_values_bec(q(1, 2), 2);
    ASSERT_EQ(v.size(), 4u);
    EXPECT_EQ(v[0], q(15, 16));
    EXPECT_EQ(v[1], q(9, 16));
    EXPECT_EQ(v[2], q(7, 16));
    EXPECT_EQ(v[3], q(1, 16));
}

TEST(Synthetic, IndexBitsRoundTrip)
{
    for (unsigned n = 1; n <= 6; ++n)
        for (std::uint64_t i = 1; i <= (std::uint64_t{1} << n); ++i)
            EXPECT_EQ(SyntheticIndex::from_index(n, i).index(), i);
    EXPECT_EQ(SyntheticIndex::from_index(3, 1).bit_string(), "000");
    EXPECT_EQ(SyntheticIndex::from_index(3, 8).bit_string(), "111");
    EXPECT_EQ(SyntheticIndex::from_index(3, 5).bit_string(), "100");
    EXPECT_THROW(SyntheticIndex::from_index(3, 9), std::domain_error);
    EXPECT_THROW(SyntheticIndex::from_index(3, 0), std::domain_error);
}

TEST(Synthetic, SingleIndexMatchesEnumeration)
{
    auto v = synthetic_values_bec(q(3, 10), 5);
    for (std::uint64_t i = 1; i <= 32; ++i)
        EXPECT_EQ(synthetic_bhattacharyya_bec(q(3, 10), SyntheticIndex::from_index(5, i)), v[i - 1]);
}

TEST(Synthetic, MartingaleMean)
{
    // E[Z_n] = z0 for the BEC
    for (auto z0 : {q(1, 4), q(1, 2), q(5, 7)})
        for (unsigned n = 0; n <= 8; ++n) {
            Rational mean = exact_expectation_bec(z0, n, [](const Rational& z) { return z; });
            EXPECT_EQ(mean, z0);
        }
}

TEST(Synthetic, ScaledWalkAgreesWithRationalWalk)
{
    auto v = synthetic_values_bec(q(2, 7), 6);
    std::size_t seen = 0;
    for_each_node_bec_scaled(q(2, 7), 6, [&](unsigned d, std::uint64_t i, const Integer& num, const Integer& den) {
        if (d == 6) {
            EXPECT_EQ(make_rational(num, den), v[i - 1]);
            ++seen;
        }
    });
    EXPECT_EQ(seen, 64u);
}

TEST(Synthetic, EnclosureContainsExact)
{
    for (std::uint64_t i = 1; i <= 16; ++i) {
        auto idx = SyntheticIndex::from_index(4, i);
        auto iv = synthetic_bhattacharyya_bec_enclosure(q(1, 3), idx);
        EXPECT_TRUE(iv.contains(synthetic_bhattacharyya_bec(q(1, 3), idx)));
    }
}

TEST(Synthetic, DepthCap)
{
    EXPECT_THROW(synthetic_values_bec(q(1, 2), kExactDepthCap + 1), std::domain_error);
}

TEST(Code, ConstructionPicksSmallestAndBreaksTiesByIndex)
{
    auto c = construct_polar_code(q(1, 2), 2, 2);
    ASSERT_EQ(c.info_set.size(), 2u);
    EXPECT_EQ(c.info_set[0], 3u);
    EXPECT_EQ(c.info_set[1], 4u);
    EXPECT_EQ(union_bound_pe(c), q(1, 2));
    // z0 = 0: every value ties at 0, so the first k indices win
    auto t = construct_polar_code(q(0), 3, 3);
    EXPECT_EQ(t.info_set, (std::vector<std::uint64_t>{1, 2, 3}));
    EXPECT_THROW(construct_polar_code(q(1, 2), 2, 5), std::domain_error);
}

TEST(Code, UnionBoundMonotoneInChannel)
{
    auto c = construct_polar_code(q(1, 2), 6, 20);
    Rational prev = -1;
    for (long k = 0; k <= 10; ++k) {
        Rational u = union_bound_pe(c, q(k, 20));
        EXPECT_GE(u, prev);
        prev = u;
    }
}

TEST(Code, Rate)
{
    auto c = make_code(3, q(1, 2), {8, 4, 8});
    EXPECT_EQ(c.info_set.size(), 2u);
    EXPECT_EQ(c.rate(), q(1, 4));
    EXPECT_THROW(make_code(3, q(1, 2), {9}), std::domain_error);
}

TEST(Capacity, Bounds)
{
    auto b = capacity_bhattacharyya_bounds(q(3, 5));
    EXPECT_EQ(b.lo, q(2, 5));
    EXPECT_EQ(b.hi, q(4, 5)); // sqrt(1 - 9/25) exactly
    auto c = capacity_bhattacharyya_bounds(q(1, 2));
    // sqrt(3)/2 = 0.86602540378443864676 (mpmath), enclosed from above
    EXPECT_GE(c.hi * c.hi, q(3, 4));
    EXPECT_NEAR(to_double(c.hi), 0.86602540378443864676, 1e-15);
}

TEST(Csv, SyntheticRows)
{
    std::ostringstream os;
    write_synthetic_csv(os, q(1, 2), 1);
    EXPECT_EQ(os.str(), "index,bits,z_exact_num,z_exact_den,z_float\n1,0,3,4,0.75\n2,1,1,4,0.25\n");
}

TEST(PowerBound, ExactAndEnclosed)
{
    Rational out;
    EXPECT_TRUE(exact_rational_power(q(9, 16), q(1, 2), out));
    EXPECT_EQ(out, q(3, 4));
    EXPECT_FALSE(exact_rational_power(q(1, 2), q(78, 100), out));
    // (1/2)^0.78 = 0.58236679323422792 (mpmath)
    Rational lo = rational_power_bound(q(1, 2), q(78, 100), Rounding::down);
    Rational hi = rational_power_bound(q(1, 2), q(78, 100), Rounding::up);
    EXPECT_LT(lo, hi);
    EXPECT_NEAR(to_double(lo), 0.58236679323422792, 1e-15);
    EXPECT_EQ(compare_power(q(1, 2), q(78, 100), lo), 1);
    EXPECT_EQ(compare_power(q(1, 2), q(78, 100), hi), -1);
    EXPECT_EQ(compare_power(q(9, 16), q(1, 2), q(3, 4)), 0);
}

TEST(Rational, NearestDouble)
{
    EXPECT_EQ(to_double(make_rational(1, 1000)), 0.001);
    EXPECT_EQ(to_double(make_rational(1, 10)), 0.1);
    EXPECT_EQ(to_double(make_rational(2, 3)), 2.0 / 3.0);
}
