#include <wavelab/stochastic.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace wavelab;

constexpr double pi = std::numbers::pi;

namespace {

RandomizationSpec single_mode()
{
    RandomizationSpec s;
    TrigMode m;
    m.m = {1, 0, 0};
    m.a = 2.0;
    s.modes.push_back(m);
    s.seed = 42;
    return s;
}

}  // namespace

TEST(Wick, SingleModeIs36Pi)
{
    const TorusGrid g(1, 64);
    EXPECT_NEAR(wick_oracle_moment(single_mode(), g, 4), 36.0 * pi, 1e-10);
    // c_6 = 15: 15 * 64 * int cos^6 = 15 * 64 * 5 pi / 8
    EXPECT_NEAR(wick_oracle_moment(single_mode(), g, 6), 600.0 * pi, 1e-9);
    EXPECT_THROW(wick_oracle_moment(single_mode(), g, 8), DomainError);
}

TEST(Wick, TwoModesAgainstTrapezoid)
{
    RandomizationSpec s;
    s.a0 = 0.5;
    s.modes.push_back({{1, 0, 0}, 1.0, 0.3});
    s.modes.push_back({{3, 0, 0}, 0.2, 0.7});
    const TorusGrid g(1, 32);
    // 3 int sigma^4 with sigma^2 = a0^2 + sum a^2 cos^2 + b^2 sin^2, periodic trapezoid on 4096 points
    const int M = 4096;
    double sum = 0.0;
    for (int i = 0; i < M; ++i) {
        const double x = two_pi * i / M;
        const double s2 = 0.25 + std::pow(std::cos(x), 2) + 0.09 * std::pow(std::sin(x), 2) +
                          0.04 * std::pow(std::cos(3 * x), 2) + 0.49 * std::pow(std::sin(3 * x), 2);
        sum += s2 * s2;
    }
    EXPECT_NEAR(wick_oracle_moment(s, g, 4), 3.0 * sum * two_pi / M, 1e-10);
}

TEST(MonteCarlo, MatchesOracle)
{
    const TorusGrid g(1, 32);
    const MomentEstimate est = mc_lq_moment(single_mode(), g, 4, 20000, 1);
    EXPECT_LE(std::abs(est.mean - 36.0 * pi), 3.5 * est.std_error);
}

TEST(MonteCarlo, ThreadCountDoesNotChangeResult)
{
    const TorusGrid g(2, 16);
    const RandomizationSpec s = random_spec(2, 4, 3, 9, true);
    const MomentEstimate a = mc_lq_moment(s, g, 4, 500, 1);
    const MomentEstimate b = mc_lq_moment(s, g, 4, 500, 3);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
}

TEST(MonteCarlo, Preconditions)
{
    const TorusGrid g(1, 16);
    EXPECT_THROW(mc_lq_moment(single_mode(), g, 3, 1000), DomainError);
    EXPECT_THROW(mc_lq_moment(single_mode(), g, 4, 50), DomainError);
    RandomizationSpec bad = single_mode();
    bad.modes[0].m = {8, 0, 0};
    EXPECT_THROW(sample_randomized_field(bad, g), DomainError);
}

TEST(Randomization, ReproducibleStreams)
{
    const TorusGrid g(1, 16);
    const GridField a = sample_randomized_field(single_mode(), g, 3);
    const GridField b = sample_randomized_field(single_mode(), g, 3);
    const GridField c = sample_randomized_field(single_mode(), g, 4);
    EXPECT_TRUE((a.samples == b.samples).all());
    EXPECT_FALSE((a.samples == c.samples).all());
    auto g1 = derived_generator(1, 0), g2 = derived_generator(1, 0);
    EXPECT_EQ(g1(), g2());
}

TEST(Randomization, SampleIsGaussianSum)
{
    // u = a0 alpha0 + a alpha cos x + b beta sin x, rebuilt from the trig field at alpha = beta = 1
    RandomizationSpec s;
    s.modes.push_back({{2, 0, 0}, 1.5, 0.0});
    const TorusGrid g(1, 16);
    const GridField u = sample_randomized_field(s, g, 0);
    const GridField t = trig_field(s, g);
    // u is a scalar multiple of cos 2x
    const double ratio = u.samples[0] / t.samples[0];
    EXPECT_LT((u.samples - ratio * t.samples).abs().maxCoeff(), 1e-12);
}

TEST(Randomization, SecondMomentPointwise)
{
    RandomizationSpec s;
    s.a0 = 0.7;
    s.modes.push_back({{1, 0, 0}, 1.0, 2.0});
    s.seed = 5;
    const TorusGrid g(1, 16);
    const int count = 20000;
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(16);
    for (int i = 0; i < count; ++i) acc += sample_randomized_field(s, g, i).samples.square();
    acc /= count;
    for (int j = 0; j < 16; ++j) {
        const double x = g.coordinate(j);
        const double sigma2 = 0.49 + std::pow(std::cos(x), 2) + 4.0 * std::pow(std::sin(x), 2);
        EXPECT_NEAR(acc[j], sigma2, 0.05 * sigma2 + 0.02);
    }
}

TEST(Randomization, RandomSpecUnitMass)
{
    const RandomizationSpec s = random_spec(3, 6, 4, 1, true);
    EXPECT_EQ(s.modes.size(), 6u);
    EXPECT_NEAR(coefficient_mass(s), 1.0, 1e-14);
}

TEST(GmMembership, Threshold)
{
    const TorusGrid g(1, 256);
    const GridField big = sample(g, [](const Eigen::Vector3d& x) { return 10.0 * std::cos(x[0]); });
    EXPECT_TRUE(gm_membership(forward_transform(big), 16, 4.0));
    const GridField small = sample(g, [](const Eigen::Vector3d& x) { return 0.01 * std::cos(x[0]); });
    EXPECT_FALSE(gm_membership(forward_transform(small), 16, 4.0));
    EXPECT_THROW(gm_membership(forward_transform(small), 8, 4.0), DomainError);
}
