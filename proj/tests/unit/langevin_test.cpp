#include <gtest/gtest.h>

#include "rffmd/errors.hpp"
#include "rffmd/langevin.hpp"
#include "rffmd/stats.hpp"
#include "test_util.hpp"

using namespace rffmd;

namespace {

class Quadratic final : public Potential {
public:
    ValueGrad value_grad(const Vec2& x) const override { return {0.5 * x.squaredNorm(), x}; }
};

// Stationary variance of x1 from one long chain.
double chain_variance(LangevinScheme scheme, double dt, long samples, long thinning, std::uint64_t seed) {
    const Quadratic pot;
    LangevinConfig cfg;
    cfg.dt = dt;
    cfg.burn_in = static_cast<long>(20.0 / dt);
    cfg.thinning = thinning;
    cfg.seed = seed;
    LangevinChain chain(pot, cfg, Vec2::Zero(), scheme);
    chain.burn_in();
    std::vector<double> xs(samples);
    for (auto& x : xs) x = chain.next_sample()[0];
    return sample_variance(xs);
}

} // namespace

TEST(LangevinStep, ZeroNoiseIsGradientStep) {
    const Vec2 out = langevin_step(Vec2(1.0, 0.0), Vec2(1.0, 0.0), 1.0, 0.01, Vec2::Zero(), Vec2::Zero());
    EXPECT_DOUBLE_EQ(out[0], 0.99);
    EXPECT_EQ(out[1], 0.0);
}

TEST(LangevinStep, AveragesConsecutiveNoise) {
    const Vec2 out = langevin_step(Vec2::Zero(), Vec2::Zero(), 2.0, 0.5, Vec2(1.0, 0.0), Vec2(3.0, -1.0));
    EXPECT_NEAR(out[0], std::sqrt(0.5) * 2.0, 1e-15);
    EXPECT_NEAR(out[1], std::sqrt(0.5) * -0.5, 1e-15);
}

TEST(LangevinStep, NonFiniteState) {
    EXPECT_THROW(langevin_step(Vec2(1e308, 0.0), Vec2(-1e308, 0.0), 1.0, 10.0, Vec2::Zero(), Vec2::Zero()),
                 NonFiniteState);
}

TEST(LangevinChain, DrawsOneNoiseVectorPerStepPlusOne) {
    const Quadratic pot;
    LangevinConfig cfg;
    LangevinChain lm(pot, cfg);
    lm.advance(137);
    EXPECT_EQ(lm.normals_drawn(), 138);
    LangevinChain em(pot, cfg, Vec2::Zero(), LangevinScheme::EulerMaruyama);
    em.advance(137);
    EXPECT_EQ(em.normals_drawn(), 137);
}

TEST(LangevinChain, LeimkuhlerMatthewsVarianceOnQuadratic) {
    const double var = chain_variance(LangevinScheme::LeimkuhlerMatthews, 0.01, 1000000, 100, 71);
    EXPECT_NEAR(var, 1.0, 0.01);
}

TEST(LangevinChain, EulerMaruyamaShowsDiscretizationBias) {
    // At dt = 0.1 the Euler-Maruyama stationary variance is 1 / (1 - dt/2); the
    // averaged-noise scheme is exact for this potential.
    const double dt = 0.1;
    const double em = chain_variance(LangevinScheme::EulerMaruyama, dt, 100000, 10, 72);
    const double lm = chain_variance(LangevinScheme::LeimkuhlerMatthews, dt, 100000, 10, 72);
    const double tol = 3.0 * std::sqrt(2.0 / 100000.0) * 1.2;
    EXPECT_NEAR(em, 1.0 / (1.0 - dt / 2.0), tol);
    EXPECT_NEAR(lm, 1.0, tol);
}

TEST(LangevinConfig, Validation) {
    LangevinConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.beta = 0.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = LangevinConfig{};
    cfg.thinning = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(SamplingPlan, CountsAndValidation) {
    const SamplingPlan hybrid = SamplingPlan::hybrid();
    EXPECT_EQ(hybrid.counts(4), (std::vector<std::size_t>{2, 2}));
    EXPECT_EQ(hybrid.counts(5), (std::vector<std::size_t>{2, 3}));
    SamplingPlan bad = hybrid;
    bad.entries[0].fraction = 0.7;
    EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(SampleDataset, ConsistentWithInnerPotential) {
    const TargetPotential target;
    LangevinConfig base;
    base.burn_in = 500;
    base.thinning = 10;
    const Dataset d = sample_dataset(target, SamplingPlan::hybrid(base), 400, 73);
    ASSERT_EQ(d.size(), 400);
    for (Eigen::Index j = 0; j < d.size(); ++j) {
        const Vec2 x = d.points().row(j).transpose();
        ASSERT_TRUE(is_finite(x));
        EXPECT_NEAR(d.values()[j], target.value(x) * target.chi_c().value(x), 1e-12);
        const ValueGrad vg = target.inner(x);
        EXPECT_EQ(d.grads()(j, 0), vg.grad[0]);
        EXPECT_EQ(d.grads()(j, 1), vg.grad[1]);
    }
    EXPECT_EQ(d.meta().betas, (std::vector<double>{1.0, 0.3}));
}

TEST(SampleDataset, EachChainContributesItsShare) {
    // With J = 4 and equal fractions the dataset is a permutation of two
    // samples from each chain; the chains are reproduced here directly.
    const TargetPotential target;
    LangevinConfig base;
    base.burn_in = 100;
    base.thinning = 5;
    const std::uint64_t seed = 74;
    const SamplingPlan plan = SamplingPlan::hybrid(base);
    const Dataset d = sample_dataset(target, plan, 4, seed);
    std::vector<Vec2> expected;
    for (std::size_t e = 0; e < 2; ++e) {
        LangevinConfig cfg = plan.entries[e].config;
        cfg.seed = derive_seed(seed, "dataset-chain", {e});
        LangevinChain chain(target, cfg);
        chain.burn_in();
        for (int i = 0; i < 2; ++i) expected.push_back(chain.next_sample());
    }
    for (const Vec2& x : expected) {
        int matches = 0;
        for (Eigen::Index j = 0; j < 4; ++j)
            if (d.points().row(j).transpose() == x) ++matches;
        EXPECT_EQ(matches, 1);
    }
}

TEST(SampleDataset, DeterministicForEqualSeeds) {
    LangevinConfig base;
    base.burn_in = 100;
    base.thinning = 5;
    const Dataset a = sample_dataset(TargetPotential{}, SamplingPlan::hybrid(base), 100, 75);
    const Dataset b = sample_dataset(TargetPotential{}, SamplingPlan::hybrid(base), 100, 75);
    EXPECT_EQ(a.points(), b.points());
    EXPECT_EQ(a.values(), b.values());
}

TEST(SampleDataset, HotterChainsReachFarther) {
    const TargetPotential target;
    LangevinConfig base;
    base.burn_in = 2000;
    base.thinning = 20;
    std::vector<double> diff;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto far_fraction = [&](double beta) {
            const Dataset d = sample_dataset(target, SamplingPlan::single(beta, base), 10000, 500 + seed);
            return (d.points().rowwise().norm().array() > 3.0).cast<double>().mean();
        };
        diff.push_back(far_fraction(0.3) - far_fraction(1.0));
    }
    const ReplicaStats s = summarize(diff);
    EXPECT_GT(s.mean - 3.0 * s.std_error, 0.0);
}

TEST(SampleDataset, ThinnedSamplesAreWeaklyCorrelated) {
    const TargetPotential target;
    LangevinConfig cfg;  // default dt, burn-in and thinning
    std::vector<double> acf;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        cfg.seed = 600 + seed;
        LangevinChain chain(target, cfg);
        chain.burn_in();
        std::vector<double> xs(5000);
        for (auto& x : xs) x = chain.next_sample()[0];
        acf.push_back(autocorrelation(xs, 1));
    }
    const ReplicaStats s = summarize(acf);
    EXPECT_LT(s.mean + 3.0 * s.std_error, 0.5);
}

TEST(InitialPhase, MomentumStatistics) {
    const Quadratic pot;
    LangevinConfig cfg;
    cfg.burn_in = 100;
    cfg.thinning = 5;
    cfg.seed = 76;
    const double beta = 0.3;
    const std::size_t M = 20000;
    const InitialPhase phase = sample_initial_phase(pot, beta, M, cfg, 8);
    ASSERT_EQ(phase.states.size(), M);
    for (int a = 0; a < 2; ++a) {
        std::vector<double> p(M);
        for (std::size_t m = 0; m < M; ++m) p[m] = phase.states[m].p[a];
        EXPECT_LT(std::abs(mean(p)), 3.0 / std::sqrt(beta * M));
        // Var of the sample variance of N(0, s^2) is 2 s^4 / (M - 1).
        const double s2 = 1.0 / beta;
        EXPECT_NEAR(sample_variance(p), s2, 3.0 * s2 * std::sqrt(2.0 / (M - 1)));
    }
}

TEST(InitialPhase, SingleSampleAndSharedNoise) {
    const Quadratic pot;
    LangevinConfig cfg;
    cfg.burn_in = 50;
    cfg.thinning = 3;
    cfg.seed = 77;
    EXPECT_EQ(sample_initial_phase(pot, 1.0, 1, cfg, 4).states.size(), 1u);
    const InitialPhase small = sample_initial_phase(pot, 1.0, 40, cfg, 4);
    const InitialPhase large = sample_initial_phase(pot, 1.0, 80, cfg, 4);
    for (std::size_t m = 0; m < 40; ++m) {
        EXPECT_EQ(small.states[m].x, large.states[m].x);
        EXPECT_EQ(small.states[m].p, large.states[m].p);
    }
    EXPECT_EQ(small.chain_of(6), 2);
}
