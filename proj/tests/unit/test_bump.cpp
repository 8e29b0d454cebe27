#include <wavelab/bump.hpp>
#include <wavelab/quadrature.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace wavelab;

constexpr double pi = std::numbers::pi;

TEST(SmoothCutoffs, StepAndPlateau)
{
    EXPECT_EQ(smooth_step(-0.1), 0.0);
    EXPECT_EQ(smooth_step(1.5), 1.0);
    EXPECT_NEAR(smooth_step(0.5), 0.5, 1e-15);
    for (double x = 0.01; x < 1.0; x += 0.01) EXPECT_NEAR(smooth_step(x) + smooth_step(1.0 - x), 1.0, 1e-14);
    EXPECT_EQ(smooth_plateau(0.3, 0.5, 1.0), 1.0);
    EXPECT_EQ(smooth_plateau(-1.2, 0.5, 1.0), 0.0);
    EXPECT_GT(smooth_plateau(0.75, 0.5, 1.0), 0.0);
    EXPECT_LT(smooth_plateau(0.75, 0.5, 1.0), 1.0);
}

TEST(BumpProfile, ValuesAndSupport)
{
    EXPECT_NEAR(bump_profile(BumpShape::exponential_bump, 0, 0.0), std::exp(-1.0), 1e-15);
    EXPECT_EQ(bump_profile(BumpShape::exponential_bump, 0, 1.0), 0.0);
    EXPECT_NEAR(bump_profile(BumpShape::cosine_power, 2, 0.5), 0.5, 1e-15);
    EXPECT_NEAR(bump_profile(BumpShape::polynomial_cutoff, 3, 0.5), std::pow(0.75, 3), 1e-15);
    EXPECT_EQ(bump_profile(BumpShape::plateau, 0, 0.4), 1.0);
    EXPECT_EQ(bump_profile(BumpShape::plateau, 0, 1.2), 0.0);
}

TEST(BumpProfile, DerivativeMatchesDifferences)
{
    for (auto shape : {BumpShape::exponential_bump, BumpShape::cosine_power, BumpShape::polynomial_cutoff,
                       BumpShape::plateau}) {
        for (double r : {0.1, 0.4, 0.6, 0.9}) {
            const double h = 1e-6;
            const double fd = (bump_profile(shape, 4, r + h) - bump_profile(shape, 4, r - h)) / (2 * h);
            EXPECT_NEAR(bump_profile_derivative(shape, 4, r), fd, 1e-6) << to_string(shape) << " r=" << r;
        }
    }
}

TEST(BumpShapeNames, RoundTrip)
{
    for (auto shape : {BumpShape::exponential_bump, BumpShape::cosine_power, BumpShape::polynomial_cutoff,
                       BumpShape::plateau})
        EXPECT_EQ(parse_bump_shape(to_string(shape)), shape);
    EXPECT_THROW(parse_bump_shape("gaussian"), ConfigurationError);
}

TEST(BumpNorms, ClosedForms)
{
    BumpSpec b;
    b.dim = 1;
    b.shape = BumpShape::cosine_power;
    b.exponent = 2;
    // int_{-1}^{1} cos^4(pi x / 2) dx = 3/4, cos^8 gives 35/64
    EXPECT_NEAR(bump_lq_norm(b, 2.0), std::sqrt(0.75), 1e-12);
    EXPECT_NEAR(bump_lq_norm(b, 4.0), std::pow(35.0 / 64.0, 0.25), 1e-12);

    b.dim = 3;
    b.shape = BumpShape::polynomial_cutoff;
    b.exponent = 1;
    b.support_radius = 2.0;
    // 4 pi int r^2 (1 - r^2)^2 dr = 32 pi / 105, times R^3
    EXPECT_NEAR(bump_lq_norm(b, 2.0), std::sqrt(32.0 * pi / 105.0 * 8.0), 1e-10);
}

TEST(BumpNorms, GridAgreesWithRadialQuadrature)
{
    BumpSpec b;
    b.dim = 3;
    b.support_radius = 1.5;
    const TorusGrid g(3, 64);
    const GridField f = make_bump(b, g);
    EXPECT_NEAR(lebesgue_norm(f, 2.0) / bump_lq_norm(b, 2.0), 1.0, 1e-6);
    EXPECT_NEAR(lebesgue_norm(f, 4.0) / bump_lq_norm(b, 4.0), 1.0, 1e-6);
}

TEST(MakeBump, Preconditions)
{
    BumpSpec b;
    b.dim = 1;
    b.support_radius = 3.5;
    EXPECT_THROW(make_bump(b, TorusGrid(1, 64)), DomainError);
    b.support_radius = 0.1;
    EXPECT_THROW(make_bump(b, TorusGrid(1, 64)), ResolutionError);
    EXPECT_NO_THROW(make_bump(b, TorusGrid(1, 512)));
    b.dim = 2;
    EXPECT_THROW(make_bump(b, TorusGrid(1, 512)), ConfigurationError);
}

TEST(MakeBump, PeriodicWrap)
{
    BumpSpec b;
    b.dim = 1;
    b.center[0] = 3.0;
    const TorusGrid g(1, 256);
    const GridField f = make_bump(b, g);
    // x = -pi sits pi - 3 away from the center through the seam
    const double r = pi - 3.0;
    EXPECT_NEAR(f.samples[0], bump_profile(b.shape, b.exponent, r), 1e-15);
    EXPECT_GT(f.samples[0], 0.0);
}

TEST(Quadrature, GaussLegendreExactness)
{
    // 20 points integrate polynomials of degree 39 exactly
    EXPECT_NEAR(integrate([](double x) { return std::pow(x, 38); }, -1.0, 1.0, 1, 20), 2.0 / 39.0, 1e-14);
    EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0.0, pi, 4, 20), 2.0, 1e-14);
}
