#include <wavelab/error.hpp>
#include <wavelab/fit.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace wavelab;

TEST(Fit, ExactPowerLaw)
{
    const std::vector<double> x{4, 8, 16, 32, 64};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * std::pow(v, -0.37));
    const FitResult f = fit_power_law(x, y);
    EXPECT_NEAR(f.exponent, -0.37, 1e-12);
    EXPECT_NEAR(f.intercept, std::log(3.0), 1e-12);
    EXPECT_NEAR(f.r2, 1.0, 1e-12);
    EXPECT_LT(f.confidence, 1e-10);
    EXPECT_EQ(f.points, 5u);
    EXPECT_EQ(f.model, "power_law");
}

TEST(Fit, LogPower)
{
    const std::vector<double> x{8, 16, 32, 64, 128};
    std::vector<double> y;
    for (double v : x) y.push_back(std::pow(std::log(v), 0.2));
    EXPECT_NEAR(fit_log_power(x, y).exponent, 0.2, 1e-12);
}

TEST(Fit, ConfidenceHalfWidth)
{
    // y = x + (+1, -1, -1, +1): slope 1, residual sum of squares 4 - 0 = 4,
    // Sxx = 5, s^2 = 4/2, se = sqrt(2/5), t_{0.975, 2} = 4.302652729911275
    const std::vector<double> x{0, 1, 2, 3};
    const std::vector<double> y{1, 0, 1, 4};
    const FitResult f = linear_fit(x, y);
    EXPECT_NEAR(f.exponent, 1.0, 1e-12);
    EXPECT_NEAR(f.confidence, 4.302652729911275 * std::sqrt(2.0 / 5.0), 1e-9);
    EXPECT_GE(f.r2, 0.0);
    EXPECT_LE(f.r2, 1.0);
}

TEST(Fit, NeedsFourPoints)
{
    EXPECT_THROW(linear_fit({1, 2, 3}, {1, 2, 3}), DomainError);
    EXPECT_THROW(fit_power_law({1, 2, 3, -4}, {1, 2, 3, 4}), DomainError);
}

TEST(Monotone, StrictChecks)
{
    EXPECT_TRUE(strictly_increasing({1, 2, 3}));
    EXPECT_FALSE(strictly_increasing({1, 2, 2}));
    EXPECT_TRUE(strictly_decreasing({3, 2, 1}));
    EXPECT_FALSE(strictly_decreasing({3, 3}));
}
