#include <polarscale/pipeline.hpp>
#include <polarscale/scaling_constants.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace polarscale;

namespace {

struct Chain {
    CandidateFunction cand;
    Rational sup;
    Rational mu;
};

const Chain& chain()
{
    static const Chain c = [] {
        CertifyRun cfg = preset_run("desk", ChannelOperator::bec);
        cfg.iteration.grid_size = 10000;
        cfg.iteration.inner_size = 10;
        auto res = run_certification(cfg, {});
        if (!res.bound.success)
            throw std::runtime_error("fixture certification failed");
        return Chain{res.candidate, res.bound.sup_bound, *res.bound.mu};
    }();
    return c;
}

const ChainConstants& constants_at_four()
{
    static const ChainConstants k = chain_constants(make_rational(4), chain().sup, chain().cand, BigFloat(0.001, kChainBits));
    return k;
}

} // namespace

TEST(TFunction, ClosedFormValues)
{
    // mpmath: t(1/2, 1/2) = 0.97857451987808002516, t(1/4, 1/3) = 0.95748293040255146590
    EXPECT_NEAR(t_function(BigFloat(0.5), BigFloat(0.5)).to_double(), 0.97857451987808002516, 1e-15);
    EXPECT_NEAR(t_function(BigFloat(0.25), BigFloat(make_rational(1, 3), MPFR_RNDN, 256)).to_double(),
                0.95748293040255146590, 1e-15);
}

TEST(Hypothesis, ExactStrictTest)
{
    // s^p 2^q < 1 with s = 1/2: mu = 1 gives equality, so it fails; mu = 11/10 holds
    EXPECT_FALSE(hypothesis_holds(make_rational(1, 2), make_rational(1)));
    EXPECT_TRUE(hypothesis_holds(make_rational(1, 2), make_rational(11, 10)));
    // the certified mu sits within 1/1000 of the threshold
    EXPECT_TRUE(hypothesis_holds(chain().sup, chain().mu));
    EXPECT_FALSE(hypothesis_holds(chain().sup, chain().mu - make_rational(1, 100)));
}

TEST(Chain, RejectsInvalidInputs)
{
    const auto& c = chain();
    EXPECT_THROW(chain_constants(make_rational(2), c.sup, c.cand, BigFloat(0.001)), std::domain_error);
    EXPECT_THROW(chain_constants(make_rational(3), c.sup, c.cand, BigFloat(0.001)), std::domain_error);
    EXPECT_THROW(chain_constants(make_rational(4), c.sup, c.cand, BigFloat(1.5)), std::domain_error);
}

TEST(Chain, IdentityAcrossMu)
{
    const auto& c = chain();
    for (Rational mu : {Rational(c.mu + make_rational(1, 100)), make_rational(4), make_rational(9, 2), make_rational(6)}) {
        auto k = chain_constants(mu, c.sup, c.cand, BigFloat(0.001, kChainBits));
        EXPECT_LT(bf::abs(k.identity_residual()).to_double(), 1e-12) << to_string(mu);
        EXPECT_GT(k.alpha.to_double(), 0);
        EXPECT_GT(k.delta.sign(), 0);
        EXPECT_LT(k.delta.to_double(), 1);
        EXPECT_LE(k.rho1.to_double(), 0.5);
    }
}

TEST(Chain, ValuesAtMuFour)
{
    const auto& k = constants_at_four();
    // rho1 = -log2(sup) rounded so that 2^-rho1 >= sup
    EXPECT_GE(bf::exp2(-k.rho1).to_double(), to_double(chain().sup) * (1 - 1e-15));
    EXPECT_NEAR(k.rho1.to_double(), -std::log2(to_double(chain().sup)), 1e-12);
    // alpha = log2(1 + (a - b)/(a + b)) with a = 2^(-1/4), b = 2^-rho1
    double a = std::pow(2.0, -0.25), b = std::pow(2.0, -k.rho1.to_double());
    EXPECT_NEAR(k.alpha.to_double(), std::log2(1 + (a - b) / (a + b)), 1e-12);
    EXPECT_NEAR((k.rho - k.alpha).to_double(), 0.25, 1e-12);
    // c1 = 1/delta, beta1 = c2^mu
    EXPECT_NEAR((k.c1 * k.delta).to_double(), 1.0, 1e-30);
    EXPECT_NEAR((bf::log2(k.beta1) / bf::log2(k.c2)).to_double(), 4.0, 1e-12);
}

TEST(Eps, RootsHitTarget)
{
    const auto& k = constants_at_four();
    BigFloat target = bf::exp2(-k.rho1);
    ASSERT_GT(k.eps1.to_double(), 0);
    ASSERT_GT(k.eps2.to_double(), 0);
    EXPECT_LT(k.eps1.to_double(), 0.5);
    EXPECT_LT(k.eps2.to_double(), 0.5);
    // t < target at the returned side of each root
    EXPECT_LT(t_function(k.alpha, k.eps1), target);
    EXPECT_THROW(solve_eps(BigFloat(0.6), k.rho1), std::domain_error);
}

TEST(C3, DominatesDenseSampling)
{
    const auto& k = constants_at_four();
    double alpha = k.alpha.to_double();
    double dense = c3_dense_estimate(chain().cand, alpha, std::max(k.eps1.to_double(), 1e-300), k.eps2.to_double(), 20000);
    EXPECT_GE(k.c3.to_double(), dense * (1 - 1e-12));
}

TEST(Lemma, ExpectationBoundSmallDepth)
{
    const auto& k = constants_at_four();
    for (auto z0 : {make_rational(1, 4), make_rational(1, 2), make_rational(3, 4)}) {
        auto rep = lemma_expectation_check(z0, k, 10);
        EXPECT_TRUE(rep.all_hold()) << to_string(z0);
    }
    auto rep = lemma_expectation_check(make_rational(1, 2), k, 1);
    // n = 1 at z0 = 1/2: both children give z(1-z) = 3/16
    EXPECT_NEAR(rep.rows[1].lhs.to_double(), std::pow(3.0 / 16.0, k.alpha.to_double()), 1e-12);
    // n = 0: (1/4)^alpha against 1/delta
    EXPECT_NEAR(rep.rows[0].lhs.to_double(), std::pow(0.25, k.alpha.to_double()), 1e-12);
}

TEST(Lemma, GapRowsAreConsistent)
{
    const auto& k = constants_at_four();
    auto rows = gap_lemma_check_bec(make_rational(1, 2), k, make_rational(1, 1000), 12);
    ASSERT_EQ(rows.size(), 13u);
    for (const auto& r : rows) {
        EXPECT_TRUE(r.holds || !r.vacuous);
        EXPECT_GE(r.fraction, 0);
        EXPECT_LE(r.fraction, 1);
    }
}

TEST(GapExponentBound, GapExponentIsInverseMu)
{
    const auto& k = constants_at_four();
    auto r = gap_exponent_bound(BigFloat(0.5, kChainBits), k);
    EXPECT_NEAR(r.gap_exponent.to_double(), 0.25, 1e-12);
    EXPECT_NEAR((r.alpha_nu * BigFloat(1.5, kChainBits)).to_double(), k.alpha.to_double(), 1e-15);
    EXPECT_NEAR(r.pe_bound(BigFloat(1024L)).to_double(), 1.0 / 32.0, 1e-15);
    EXPECT_THROW(gap_exponent_bound(BigFloat(0L), k), std::domain_error);
}

TEST(Blocklength, ScalesAsGapToMinusMu)
{
    const auto& k = constants_at_four();
    BigFloat a = blocklength_bound(k, BigFloat(0.1)), b = blocklength_bound(k, BigFloat(0.05));
    EXPECT_NEAR((b / a).to_double(), 16.0, 1e-9);
    EXPECT_THROW(blocklength_bound(k, BigFloat(0L)), std::domain_error);
}

TEST(ProofInequalities, SexticBracketPositive)
{
    EXPECT_EQ(y2_polynomial(make_rational(0)), 2);
    EXPECT_EQ(y2_polynomial(make_rational(1)), 0);
    auto r = check_inequality_y2(2000);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.negative_points, 0u);
}

TEST(ProofInequalities, TConcavity)
{
    auto r = t_concavity_check(constants_at_four().alpha, 2000);
    EXPECT_TRUE(r.ok());
    EXPECT_GT(r.triples, 0u);
}
