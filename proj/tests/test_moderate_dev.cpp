#include <polarscale/moderate_dev.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace polarscale;

TEST(Entropy, KnownValues)
{
    EXPECT_EQ(h2(0.0), 0.0);
    EXPECT_EQ(h2(1.0), 0.0);
    EXPECT_DOUBLE_EQ(h2(0.5), 1.0);
    // mpmath: h2(0.11) = 0.49991595816452799564, h2^-1(1/2) = 0.11002786443835955126
    EXPECT_NEAR(h2(0.11), 0.49991595816452799564, 1e-15);
    EXPECT_NEAR(h2_inv(0.5), 0.11002786443835955126, 1e-12);
    EXPECT_EQ(h2_inv(0.0), 0.0);
    EXPECT_EQ(h2_inv(1.0), 0.5);
    EXPECT_THROW(h2(1.5), std::domain_error);
}

TEST(Entropy, InverseRoundTrip)
{
    for (int k = 1; k < 50; ++k) {
        double x = k / 100.0;
        EXPECT_NEAR(h2_inv(h2(x)), x, 1e-10);
    }
}

TEST(Tradeoff, PointValues)
{
    auto p = tradeoff_point(0.9, 4.0);
    EXPECT_NEAR(p.entropy_arg, 3.5 / 3.6, 1e-15);
    // mpmath: 0.9 h2^-1(35/36) = 0.36197881723060825326
    EXPECT_NEAR(p.pe_exponent, 0.36197881723060825326, 1e-11);
    EXPECT_NEAR(p.gap_exponent, 40.0, 1e-12);
    EXPECT_THROW(tradeoff_point(0.2, 4.0), std::domain_error);
    EXPECT_THROW(tradeoff_point(1.0, 4.0), std::domain_error);
}

TEST(Tradeoff, Monotone)
{
    for (double mu : {3.639, 4.714}) {
        double prev_pe = 0, prev_gap = 0;
        for (double g = tradeoff_lower_gamma(mu) + 0.01; g < 0.999; g += 0.01) {
            auto p = tradeoff_point(g, mu);
            EXPECT_GT(p.pe_exponent, prev_pe);
            EXPECT_GT(p.gap_exponent, prev_gap);
            EXPECT_LT(p.pe_exponent, 0.5);
            prev_pe = p.pe_exponent;
            prev_gap = p.gap_exponent;
        }
    }
}

TEST(Tradeoff, LowerEndpointTendsToZero)
{
    for (double mu : {3.639, 4.714}) {
        auto p = tradeoff_point(tradeoff_lower_gamma(mu) + 1e-9, mu);
        EXPECT_LT(p.pe_exponent, 1e-6);
    }
}

TEST(Tradeoff, UpperEndpointValue)
{
    // gamma = 1 - 1e-4, mu = 4.714: 0.49723868383497990938 (mpmath)
    EXPECT_NEAR(tradeoff_point(1 - 1e-4, 4.714).pe_exponent, 0.49723868383497990938, 1e-10);
}

TEST(Tradeoff, CsvShape)
{
    std::ostringstream os;
    write_tradeoff_csv(os, {tradeoff_point(0.5, 4.0)});
    EXPECT_EQ(os.str().substr(0, 34), "gamma,pe_exponent,gap_exponent\n0.5");
}

TEST(JointConstants, ClosedForm)
{
    // delta = 1/100: c5 = sqrt2 + 200, c6 = 2/(sqrt2-1)^2, c7 = 1 + sqrt2 (c5 + c6 sqrt2/ln2)
    // mpmath: c5 = 201.41421356237309505, c6 = 11.656854249492380195, c7 = 319.47728411083520236,
    // beta3 (mu = 4) = 10417414273.916890193
    auto k = joint_constants(BigFloat(make_rational(1, 100), MPFR_RNDN, 256), make_rational(4));
    EXPECT_NEAR(k.c5.to_double(), 201.41421356237309505, 1e-12);
    EXPECT_NEAR(k.c6.to_double(), 11.656854249492380195, 1e-13);
    EXPECT_NEAR(k.c7.to_double(), 319.47728411083520236, 1e-11);
    EXPECT_NEAR(k.beta3.to_double() / 10417414273.916890193, 1.0, 1e-14);
    EXPECT_THROW(joint_constants(BigFloat(0L), make_rational(4)), std::domain_error);
}

TEST(Binomial, ExactTail)
{
    auto r = binomial_tail_check(10, make_rational(3, 10));
    EXPECT_EQ(r.kmax, 3u);
    // (1 + 10 + 45 + 120) / 1024
    EXPECT_EQ(r.tail, make_rational(176, 1024));
    EXPECT_TRUE(r.holds);
    EXPECT_THROW(binomial_tail_check(0, make_rational(1, 4)), std::domain_error);
    EXPECT_THROW(binomial_tail_check(5, make_rational(3, 4)), std::domain_error);
}

TEST(Binomial, SweepUpToThirty)
{
    auto s = binomial_tail_sweep(30);
    EXPECT_EQ(s.checked, 270u);
    EXPECT_TRUE(s.ok());
}

TEST(ZDependent, ExponentStructure)
{
    auto z = z_dependent_exponents(0.9, 4.0);
    EXPECT_NEAR(z.z_exponent(1.0), 0.5, 1e-15);
    EXPECT_NEAR(z.z_exponent(1024.0), 0.5 * std::pow(1024.0, z.point.pe_exponent), 1e-9);
}

TEST(JointBound, FiniteCheckIsConsistent)
{
    auto jc = joint_constants(BigFloat(make_rational(1, 100), MPFR_RNDN, 256), make_rational(4));
    auto r = joint_bound_check_bec(make_rational(1, 2), 12, 0.9, 4.0, jc);
    EXPECT_EQ(r.n1, 11u);
    EXPECT_EQ(r.n0, 1u);
    EXPECT_GE(r.lhs, 0);
    EXPECT_LE(r.lhs, make_rational(1, 2));
    // at this depth c7 2^(-n(1-gamma)/mu) exceeds the capacity
    EXPECT_TRUE(r.vacuous);
    EXPECT_TRUE(r.holds);
}
