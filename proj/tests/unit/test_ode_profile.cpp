#include <wavelab/ode_profile.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace wavelab;

namespace {

// Closed form of the period through Beta functions.
double gamma_period(double p)
{
    const double a = 1.0 / (p + 1.0);
    return 4.0 * std::sqrt(std::numbers::pi) * std::tgamma(a) / (std::sqrt(2.0 * (p + 1.0)) * std::tgamma(a + 0.5));
}

// Classical RK4 on V'' = -|V|^{p-1} V.
std::pair<double, double> rk4(double p, double t, int steps)
{
    auto f = [p](double v) { return -std::pow(std::abs(v), p - 1.0) * v; };
    double v = 1.0, w = 0.0;
    const double h = t / steps;
    for (int i = 0; i < steps; ++i) {
        const double k1v = w, k1w = f(v);
        const double k2v = w + 0.5 * h * k1w, k2w = f(v + 0.5 * h * k1v);
        const double k3v = w + 0.5 * h * k2w, k3w = f(v + 0.5 * h * k2v);
        const double k4v = w + h * k3w, k4w = f(v + h * k3v);
        v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        w += h / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
    }
    return {v, w};
}

}  // namespace

TEST(OdeProfile, PeriodMatchesClosedForm)
{
    EXPECT_NEAR(gamma_period(3.0), 7.416298709205487, 1e-12);
    for (double p : {3.0, 3.5, 4.0, 4.9}) {
        const OdeProfile& prof = cached_profile(p);
        EXPECT_NEAR(prof.period, gamma_period(p), 1e-8 * gamma_period(p)) << "p=" << p;
        EXPECT_NEAR(compute_period(p), gamma_period(p), 1e-10 * gamma_period(p)) << "p=" << p;
        EXPECT_NEAR(prof.period_integrated, gamma_period(p), 1e-8 * gamma_period(p)) << "p=" << p;
    }
}

TEST(OdeProfile, EnergyConserved)
{
    for (double p : {3.0, 3.5, 4.0, 4.9}) {
        const OdeProfile& prof = cached_profile(p);
        EXPECT_LE(prof.energy_drift, 1e-8);
        EXPECT_NEAR(profile_energy(p, 1.0, 0.0), 1.0 / (p + 1.0), 1e-15);
    }
}

TEST(OdeProfile, SymmetryPoints)
{
    const OdeProfile& prof = cached_profile(3.0);
    const double T = prof.period;
    EXPECT_NEAR(evaluate_profile(prof, 0.25 * T).first, 0.0, 1e-9);
    EXPECT_NEAR(evaluate_profile(prof, 0.5 * T).first, -1.0, 1e-9);
    EXPECT_NEAR(evaluate_profile(prof, T).first, 1.0, 1e-9);
    // even in t, periodic
    EXPECT_NEAR(evaluate_profile(prof, -1.3).first, evaluate_profile(prof, 1.3).first, 1e-9);
    EXPECT_NEAR(evaluate_profile(prof, 1.3 + 5 * T).first, evaluate_profile(prof, 1.3).first, 1e-9);
}

TEST(OdeProfile, InterpolationMatchesIndependentIntegrator)
{
    std::mt19937_64 gen(2);
    for (double p : {3.0, 4.5}) {
        const OdeProfile& prof = cached_profile(p);
        std::uniform_real_distribution<double> u(0.0, 2.0 * prof.period);
        for (int i = 0; i < 8; ++i) {
            const double t = u(gen);
            const auto [v, w] = rk4(p, t, 40000);
            const auto [V, W] = evaluate_profile(prof, t);
            EXPECT_NEAR(V, v, 1e-9) << "p=" << p << " t=" << t;
            EXPECT_NEAR(W, w, 1e-9) << "p=" << p << " t=" << t;
        }
    }
}

TEST(OdeProfile, DirectIntegration)
{
    const auto [v, w] = integrate_oscillator(3.0, 1.0, 0.0, 2.0, 1e-3);
    const auto [rv, rw] = rk4(3.0, 2.0, 40000);
    EXPECT_NEAR(v, rv, 1e-10);
    EXPECT_NEAR(w, rw, 1e-10);
}

TEST(OdeProfile, RejectsBadExponent)
{
    EXPECT_THROW(integrate_profile(2.0), DomainError);
    EXPECT_THROW(integrate_profile(5.0), DomainError);
}

TEST(OdeProfile, RescaledSolutionSolvesOde)
{
    const TorusGrid g(1, 32);
    const GridField A = sample(g, [](const Eigen::Vector3d& x) { return 1.0 + 0.5 * std::cos(x[0]); });
    const RescaledOdeSolution sol{&cached_profile(3.0), A};
    const double t = 0.7, h = 1e-4;
    const WaveState a = exact_ode_solution(sol, t - h), b = exact_ode_solution(sol, t), c = exact_ode_solution(sol, t + h);
    const Eigen::ArrayXd utt = (a.u.samples - 2 * b.u.samples + c.u.samples) / (h * h);
    const Eigen::ArrayXd residual = utt + b.u.samples.abs().square() * b.u.samples;
    EXPECT_LT(residual.abs().maxCoeff(), 1e-5);
    const Eigen::ArrayXd ut = (c.u.samples - a.u.samples) / (2 * h);
    EXPECT_LT((ut - b.ut.samples).abs().maxCoeff(), 1e-6);
    const WaveState zero = exact_ode_solution(sol, 0.0);
    EXPECT_LT((zero.u.samples - A.samples).abs().maxCoeff(), 1e-14);
}
