#include <polarscale/certify.hpp>
#include <polarscale/pipeline.hpp>
#include <polarscale/transcript_verify.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace polarscale;

namespace {

// BEC chain at N_s = 10^4, shared by several tests.
struct SmallRun {
    CandidateFunction cand;
    CertifiedBound bound;
    Transcript transcript;
};

const SmallRun& small_run()
{
    static const SmallRun run = [] {
        SmallRun r;
        CertifyRun cfg = preset_run("desk", ChannelOperator::bec);
        cfg.iteration.grid_size = 10000;
        cfg.iteration.inner_size = 10;
        auto res = run_certification(cfg, {}, &r.transcript);
        r.cand = res.candidate;
        r.bound = res.bound;
        return r;
    }();
    return run;
}

} // namespace

TEST(Mu, ExactPredicate)
{
    Rational s = make_rational(4, 5);
    // 1/log2(5/4) = 3.1062837195053898760 (mpmath); smallest p/q with q <= 1000 is 2718/875
    auto mu = smallest_certified_mu(s, 1000);
    ASSERT_TRUE(mu);
    EXPECT_EQ(*mu, make_rational(2718, 875));
    EXPECT_TRUE(mu_holds(s, *mu));
    EXPECT_FALSE(mu_holds(s, make_rational(3106, 1000)));
    EXPECT_TRUE(mu_holds(s, make_rational(3107, 1000)));
    EXPECT_FALSE(smallest_certified_mu(make_rational(1), 1000));
}

TEST(Bounds, H0MatchesClosedForm)
{
    CandidateFunction c = small_run().cand;
    c.grid_size = 1000000;
    // 10^(-6*0.72)/2 + 2^(-0.28) = 0.82361494877218926192 (mpmath)
    Rational h0 = bound_H0(c);
    EXPECT_GE(to_double(h0), 0.82361494877218926192 - 1e-16);
    EXPECT_NEAR(to_double(h0), 0.82361494877218926192, 1e-15);
}

TEST(Bounds, H1BracketNearTwoOverN)
{
    // N - (N-1) sqrt(1 + 2/N - 1/N^2) at N = 10^6 is 1.999998000002499996e-6 (mpmath)
    Rational b = h1_bracket_upper(1000000, 128);
    EXPECT_GE(to_double(b), 1.999998000002499996e-6 * (1 - 1e-15));
    EXPECT_NEAR(to_double(b) / 1.999998000002499996e-6, 1.0, 1e-12);
}

TEST(Certify, SmallBecRunSucceeds)
{
    const auto& r = small_run();
    ASSERT_TRUE(r.bound.success) << r.bound.diagnostic;
    EXPECT_LT(r.bound.sup_bound, 1);
    EXPECT_GE(r.bound.sup_bound, r.bound.h0);
    EXPECT_GE(r.bound.sup_bound, r.bound.h1);
    EXPECT_GE(r.bound.sup_bound, r.bound.middle_max);
    ASSERT_TRUE(r.bound.mu);
    EXPECT_TRUE(mu_holds(r.bound.sup_bound, *r.bound.mu));
    EXPECT_GT(to_double(*r.bound.mu), 3.6);
    EXPECT_LT(to_double(*r.bound.mu), 4.0);
}

TEST(Certify, TranscriptReplaysCleanly)
{
    const auto& r = small_run();
    EXPECT_EQ(r.transcript.failures(), 0u);
    std::stringstream ss;
    r.transcript.write(ss);
    auto rep = replay::verify(ss);
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.assertions, r.transcript.assertions());
}

TEST(Certify, TamperedTranscriptIsCaught)
{
    std::stringstream ss;
    small_run().transcript.write(ss);
    std::string text = ss.str();
    // flip the last assertion's relation
    auto pos = text.rfind(" <= ");
    ASSERT_NE(pos, std::string::npos);
    text.replace(pos, 4, " >= ");
    std::istringstream in(text);
    auto rep = replay::verify(in);
    EXPECT_FALSE(rep.ok());
}

TEST(Certify, CandidateCsvRoundTrip)
{
    const auto& c = small_run().cand;
    std::stringstream ss;
    write_candidate_csv(ss, c);
    auto back = read_candidate_csv(ss);
    EXPECT_EQ(back.xs, c.xs);
    EXPECT_EQ(back.hs, c.hs);
    EXPECT_EQ(back.eta, c.eta);
    EXPECT_EQ(back.grid_size, c.grid_size);
}

TEST(Presets, PaperParameters)
{
    auto b = preset_run("paper", ChannelOperator::bmsc);
    EXPECT_EQ(b.iteration.grid_size, 1000000u);
    EXPECT_EQ(b.iteration.inner_size, 10000u);
    EXPECT_EQ(b.iteration.steps, 100u);
    EXPECT_EQ(b.iteration.init_exponent, make_rational(3, 4));
    EXPECT_EQ(b.candidate.eta, make_rational(78, 100));
    EXPECT_EQ(b.candidate.mbar, 13u);
    auto e = preset_run("paper", ChannelOperator::bec);
    EXPECT_EQ(e.iteration.init_exponent, make_rational(2, 3));
    EXPECT_EQ(e.candidate.eta, make_rational(72, 100));
    EXPECT_EQ(e.candidate.mbar, 5u);
    EXPECT_EQ(e.candidate.delta_s, make_rational(1, 10000));
    EXPECT_THROW(preset_run("quick", ChannelOperator::bec), std::invalid_argument);
}
