#include <wavelab/data_family.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace wavelab;

TEST(Exponents, ExpandedAndFactoredAgree)
{
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> up(3.0, 5.0), us(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double p = up(gen), s = us(gen) * critical_regularity(p);
        EXPECT_NEAR(g_expanded(s, p), g_factored(s, p), 1e-12);
        EXPECT_LE(g_expanded(s, p), 1e-12);
    }
}

TEST(Exponents, CubicCase)
{
    for (double s : {0.05, 0.1, 0.25, 0.4, 0.49}) {
        DataFamilyParams prm;
        prm.s = s;
        prm.p = 3.0;
        const ExponentLedger e = exponent_ledger(prm);
        EXPECT_EQ(e.q2, 1.0 - s);
        EXPECT_DOUBLE_EQ(e.q1, 1.5 - s);
    }
    EXPECT_DOUBLE_EQ(critical_regularity(3.0), 0.5);
    EXPECT_DOUBLE_EQ(critical_regularity(4.0), 1.5 - 2.0 / 3.0);
}

TEST(Exponents, LedgerFormulas)
{
    DataFamilyParams prm;
    prm.p = 3.4;
    prm.s = 0.2;
    prm.delta1 = 0.13;
    prm.delta2 = 0.07;
    prm.n = 50;
    const ExponentLedger e = exponent_ledger(prm);
    const double L = std::log(50.0);
    const double kappa = std::pow(L, -0.13);
    const double q1 = 1.5 - 0.2;
    EXPECT_NEAR(e.kappa_n, kappa, 1e-15);
    EXPECT_NEAR(e.t_n, std::pow(L, 0.07) * std::pow(kappa * std::pow(50.0, q1), -1.2), 1e-15);
    EXPECT_NEAR(e.q2, 0.8 * (1.5 - 1.0 / 2.4 - 0.2), 1e-15);
    const ExponentLedger big = exponent_ledger_log(prm, 1e5);
    EXPECT_TRUE(std::isfinite(big.log_t_n));
    EXPECT_LT(big.log_t_n, -1e4);
}

TEST(Exponents, Validation)
{
    DataFamilyParams prm;
    prm.s = 0.6;  // above s_c = 1/2 for p = 3
    EXPECT_THROW(validate(prm), DomainError);
    prm.s = 0.25;
    prm.p = 5.0;
    EXPECT_THROW(validate(prm), DomainError);
    prm.p = 3.0;
    prm.delta1 = 0.0;
    EXPECT_THROW(validate(prm), DomainError);
}

TEST(PsiN, PeakAndSupport)
{
    DataFamilyParams prm;
    prm.n = 4;
    BumpSpec b;
    b.dim = 1;
    const TorusGrid g(1, 256);
    const GridField psi = make_psi_n(prm, b, g);
    const ExponentLedger e = exponent_ledger(prm);
    EXPECT_NEAR(psi.samples.maxCoeff(), e.kappa_n * std::pow(4.0, e.q1) * std::exp(-1.0), 1e-12);
    for (Eigen::Index i = 0; i < psi.samples.size(); ++i)
        if (std::abs(g.coordinate(static_cast<int>(i))) >= 0.25) EXPECT_EQ(psi.samples[i], 0.0);
}

TEST(PsiN, NormTableMatchesGrid)
{
    DataFamilyParams prm;
    prm.n = 16;
    BumpSpec b;
    b.dim = 1;
    const TorusGrid g(1, 8192);
    const double grid = sobolev_norm(forward_transform(make_psi_n(prm, b, g)), prm.s);
    const PsiNormTable table(prm, b);
    EXPECT_NEAR(table.hs_norm(std::log(16.0)) / grid, 1.0, 1e-3);
}

TEST(PsiN, BudgetSchedule)
{
    DataFamilyParams prm;
    prm.delta1 = 2.0;  // fast decay keeps n moderate
    BumpSpec b;
    b.dim = 3;
    const auto sched = budget_schedule(prm, b, 1, 3);
    const PsiNormTable table(prm, b);
    ASSERT_EQ(sched.size(), 3u);
    for (std::size_t k = 0; k < sched.size(); ++k) {
        EXPECT_LE(table.hs_norm(sched[k]), std::ldexp(1.0, -static_cast<int>(k) - 1) * (1 + 1e-12));
        if (k) EXPECT_GT(sched[k], sched[k - 1]);
    }
}

TEST(BumpMoment, AdmissibleAndDivergentProfiles)
{
    BumpSpec b;
    b.dim = 3;
    EXPECT_TRUE(std::isfinite(bump_moment_check(b, 3.0)));
    b.shape = BumpShape::polynomial_cutoff;
    b.exponent = 2;
    EXPECT_TRUE(std::isfinite(bump_moment_check(b, 3.0)));
    b.exponent = 1;
    EXPECT_THROW(bump_moment_check(b, 3.0), InadmissibleBumpError);
}

TEST(BumpMoment, ScalesWithRadius)
{
    BumpSpec a;
    a.dim = 3;
    BumpSpec b = a;
    b.support_radius = 2.0;
    EXPECT_NEAR(bump_moment_check(b, 3.0) / bump_moment_check(a, 3.0), std::pow(2.0, -3.0), 1e-6);
}

TEST(Gdelta, ScheduleAndLedger)
{
    const double eps = 1e-2;
    for (int M = 0; M <= 30; ++M) {
        const AnalyticLedger led = gdelta_ledger(M, eps, 4.0, 1, default_chi(1));
        EXPECT_NEAR(led.sum_eps_sq, eps * (1.0 - std::ldexp(1.0, -M)), 1e-15);
        EXPECT_LE(led.sum_eps_sq, eps);
    }
    EXPECT_DOUBLE_EQ(gdelta_log2_scale(3), 18.0);
    EXPECT_DOUBLE_EQ(gdelta_position(2), 0.1875);
    EXPECT_THROW(gdelta_ledger(2, eps, 2.0, 1, default_chi(1)), DomainError);
}

TEST(Gdelta, GridSumMatchesLedger)
{
    const TorusGrid g(1, 1 << 18);
    const auto [v, led] = make_gdelta_sum(SpectrumField(g), 0, 1, 1e-2, 4.0, g, default_chi(1));
    // about 20 points across the packet
    EXPECT_NEAR(lebesgue_norm(v, 2.0) / std::sqrt(led.sum_eps_sq), 1.0, 1e-3);
    EXPECT_NEAR(lebesgue_norm(v, 4.0) / led.lq_norm(), 1.0, 1e-3);
}

TEST(Instantaneous, OverlapRejected)
{
    DataFamilyParams prm;
    BumpSpec b;
    b.dim = 1;
    const TorusGrid g(1, 1024);
    std::vector<InstantPacket> sched(2);
    sched[0].log_n = std::log(4.0);
    sched[1].log_n = std::log(5.0);
    sched[1].center[0] = 0.3;
    EXPECT_THROW(make_instantaneous_data(WaveState(g), sched, prm, b), ScheduleError);
    sched[0].center[0] = -1.5;
    sched[1].center[0] = 1.5;
    const InstantaneousData data = make_instantaneous_data(WaveState(g), sched, prm, b);
    ASSERT_EQ(data.boxes.size(), 2u);
    EXPECT_NEAR(data.boxes[0].half_width[0], 0.25 + data.ledgers[0].t_n, 1e-15);
}
