#include <wavelab/bump.hpp>
#include <wavelab/ode_profile.hpp>
#include <wavelab/wave_solver.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace wavelab;

namespace {

constexpr double pi = std::numbers::pi;

GridField smooth_datum(const TorusGrid& g)
{
    return sample(g, [](const Eigen::Vector3d& x) { return 0.8 * std::exp(std::cos(x[0]) - 1.0) + 0.2 * std::sin(2 * x[0]); });
}

}  // namespace

TEST(LinearFlow, PlaneWave)
{
    const TorusGrid g(2, 16);
    const WaveState s(sample(g, [](const Eigen::Vector3d& x) { return std::cos(3 * x[0] + 4 * x[1]); }), GridField(g), 0.0);
    const double t = 0.37;
    const WaveState out = linear_flow(s, t);
    const GridField e = sample(g, [t](const Eigen::Vector3d& x) { return std::cos(3 * x[0] + 4 * x[1]) * std::cos(5 * t); });
    const GridField et = sample(g, [t](const Eigen::Vector3d& x) { return -5 * std::cos(3 * x[0] + 4 * x[1]) * std::sin(5 * t); });
    EXPECT_LT((out.u.samples - e.samples).abs().maxCoeff(), 1e-13);
    EXPECT_LT((out.ut.samples - et.samples).abs().maxCoeff(), 1e-12);
    EXPECT_DOUBLE_EQ(out.time, t);
}

TEST(LinearFlow, ZeroModeMovesLinearly)
{
    const TorusGrid g(1, 16);
    GridField u(g), ut(g);
    u.samples.setConstant(2.0);
    ut.samples.setConstant(-0.5);
    const WaveState out = linear_flow(WaveState(u, ut, 0.0), 3.0);
    EXPECT_NEAR(out.u.samples.maxCoeff(), 0.5, 1e-14);
    EXPECT_NEAR(out.ut.samples.minCoeff(), -0.5, 1e-14);
}

TEST(LinearFlow, GroupPropertyAndEnergy)
{
    const TorusGrid g(1, 64);
    const WaveState s(smooth_datum(g), sample(g, [](const Eigen::Vector3d& x) { return std::sin(x[0]); }), 0.0);
    const WaveState a = linear_flow(linear_flow(s, 0.3), 0.9);
    const WaveState b = linear_flow(s, 1.2);
    EXPECT_LT((a.u.samples - b.u.samples).abs().maxCoeff(), 1e-13);
    EXPECT_NEAR(linear_energy(b), linear_energy(s), 1e-12 * linear_energy(s));
    const WaveState back = linear_flow(reverse_velocity(b), 1.2);
    EXPECT_LT((back.u.samples - s.u.samples).abs().maxCoeff(), 1e-13);
}

TEST(Evolve, ConstantDataFollowsOde)
{
    const double p = 3.0, A = 1.7;
    const TorusGrid g(1, 16);
    GridField u(g);
    u.samples.setConstant(A);
    SolverConfig cfg;
    cfg.p = p;
    cfg.dt = 1e-3;
    const double T = 2.0;
    const EvolveResult r = evolve(WaveState(u, GridField(g), 0.0), T, cfg, {}, nullptr);
    ASSERT_EQ(r.status, EvolveStatus::ok);
    const auto [V, W] = evaluate_profile(cached_profile(p), T * A);
    EXPECT_NEAR(r.final_state.u.samples[5], A * V, 1e-5);
    EXPECT_NEAR(r.final_state.ut.samples[5], A * A * W, 1e-5);
    EXPECT_NEAR(r.final_state.time, T, 1e-15);
}

TEST(Evolve, StrangIsSecondOrder)
{
    const TorusGrid g(1, 64);
    const WaveState s(smooth_datum(g), GridField(g), 0.0);
    SolverConfig cfg;
    cfg.p = 3.0;
    const double T = 1.0;
    auto run = [&](double dt) {
        cfg.dt = dt;
        return evolve(s, T, cfg, {}, nullptr).final_state.u;
    };
    const GridField ref = run(T / 4096);
    const double e1 = (run(T / 64).samples - ref.samples).abs().maxCoeff();
    const double e2 = (run(T / 128).samples - ref.samples).abs().maxCoeff();
    EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.1);
}

TEST(Evolve, HamiltonianNearlyConserved)
{
    const TorusGrid g(2, 32);
    const WaveState s(sample(g, [](const Eigen::Vector3d& x) { return std::exp(std::cos(x[0]) + std::sin(x[1]) - 2.0); }),
                      GridField(g), 0.0);
    SolverConfig cfg;
    cfg.p = 4.0;
    cfg.dt = 1e-3;
    const WaveState out = evolve(s, 1.0, cfg, {}, nullptr).final_state;
    EXPECT_NEAR(hamiltonian(out, 4.0), hamiltonian(s, 4.0), 1e-6 * hamiltonian(s, 4.0));
}

TEST(Evolve, SamplesAndObserver)
{
    const TorusGrid g(1, 16);
    const WaveState s(smooth_datum(g), GridField(g), 0.0);
    SolverConfig cfg;
    cfg.dt = 0.01;
    const Trajectory tr = evolve(s, 0.5, cfg, {0.0, 0.1, 0.5});
    ASSERT_EQ(tr.states.size(), 3u);
    EXPECT_NEAR(tr.states[1].time, 0.1, 1e-14);
    const EvolveResult direct = evolve(s, 0.1, cfg, {}, nullptr);
    EXPECT_LT((direct.final_state.u.samples - tr.states[1].u.samples).abs().maxCoeff(), 1e-13);
    EXPECT_THROW(evolve(s, 0.5, cfg, {0.105}), DomainError);
    EXPECT_THROW(evolve(s, 0.5, cfg, {0.6}), DomainError);
}

TEST(Evolve, BlowupFlagged)
{
    const TorusGrid g(1, 16);
    GridField u(g);
    u.samples.setConstant(50.0);
    SolverConfig cfg;
    cfg.dt = 0.05;  // far too coarse for amplitude 50
    cfg.blowup_factor = 2.0;
    const EvolveResult r = evolve(WaveState(u, GridField(g), 0.0), 5.0, cfg, {}, nullptr);
    EXPECT_EQ(r.status, EvolveStatus::blowup);
    EXPECT_LT(r.steps, 100);
}

TEST(Nonlinearity, PaddingRemovesAliasing)
{
    // cos^3(5x) = (3 cos 5x + cos 15x) / 4; on 16 points 15 aliases to 1
    const TorusGrid g(1, 16);
    const WaveState s(sample(g, [](const Eigen::Vector3d& x) { return std::cos(5 * x[0]); }), GridField(g), 0.0);
    const WaveState padded = nonlinear_substep(s, 1.0, 3.0, 2);
    const GridField expect = sample(g, [](const Eigen::Vector3d& x) { return -0.75 * std::cos(5 * x[0]); });
    EXPECT_LT((padded.ut.samples - expect.samples).abs().maxCoeff(), 1e-13);
    const WaveState aliased = nonlinear_substep(s, 1.0, 3.0, 1);
    EXPECT_GT((aliased.ut.samples - expect.samples).abs().maxCoeff(), 0.2);
}

TEST(Solver, ConfigValidation)
{
    SolverConfig cfg;
    cfg.padding_factor = 4;
    EXPECT_THROW(validate(cfg), ConfigurationError);
    cfg.padding_factor = 2;
    cfg.dt = -1.0;
    EXPECT_THROW(validate(cfg), ConfigurationError);
}

TEST(FiniteSpeed, LeakageUnderLinearFlow)
{
    for (int d : {1, 3}) {
        const TorusGrid g(d, d == 1 ? 1024 : 64);
        BumpSpec b;
        b.dim = d;
        b.support_radius = d == 1 ? 1.0 : 2.0;  // about 40 points across in 3D
        const WaveState s(make_bump(b, g), 0.5 * make_bump(b, g), 0.0);
        Box box;
        for (int a = 0; a < d; ++a) box.half_width[a] = b.support_radius;
        const double t = pi / 4;
        EXPECT_LE(light_cone_leakage(linear_flow(s, t), {box}, t), 1e-6) << "d=" << d;
        // without the light-cone enlargement most energy has left the box
        EXPECT_GT(light_cone_leakage(linear_flow(s, t), {box}, t, 0.0), 0.1) << "d=" << d;
    }
}

TEST(Diagnostics, Values)
{
    const TorusGrid g(1, 32);
    const WaveState s(sample(g, [](const Eigen::Vector3d& x) { return std::cos(x[0]); }), GridField(g), 0.0);
    const Diagnostics d = diagnostics(s, 0.5, 3.0, {});
    EXPECT_NEAR(d.l2, std::sqrt(pi), 1e-12);
    EXPECT_NEAR(d.linf, 1.0, 1e-15);
    // |grad u|^2/2 = pi/2, |u|^4/4 = 3 pi / 16
    EXPECT_NEAR(d.hamiltonian, 0.5 * pi + 3.0 * pi / 16.0, 1e-12);
}
