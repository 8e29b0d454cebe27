#pragma once

#include <wavelab/wave_state.hpp>

#include <Eigen/Dense>
#include <filesystem>
#include <utility>

namespace wavelab {

// Periodic solution of V'' + |V|^{p-1} V = 0, V(0) = 1, V'(0) = 0, tabulated on a
// uniform grid over exactly one period.
struct OdeProfile {
    double p = 3.0;
    double period = 0.0;
    double step = 0.0;
    Eigen::ArrayXd sample_times;
    Eigen::ArrayXd V;
    Eigen::ArrayXd Vdot;
    // max |H - 1/(p+1)| / (1/(p+1)) over the table.
    double energy_drift = 0.0;
    // Period from the integrator's zero crossings of Vdot, and from quadrature.
    double period_integrated = 0.0;
    double period_quadrature = 0.0;
};

double profile_energy(double p, double V, double Vdot);

double compute_period(double p);

OdeProfile integrate_profile(double p, double tol = 1e-10);

// Shared table per p, built on first use.
const OdeProfile& cached_profile(double p);

std::pair<double, double> evaluate_profile(const OdeProfile& profile, double t);

// Direct integration of the oscillator to time t from (V0, Vdot0) with fixed steps.
std::pair<double, double> integrate_oscillator(double p, double V0, double Vdot0, double t,
                                               double max_step);

struct RescaledOdeSolution {
    const OdeProfile* profile = nullptr;
    GridField amplitude;
};

// v(x,t) = A(x) V(t A(x)^{(p-1)/2}) pointwise.
WaveState exact_ode_solution(const RescaledOdeSolution& spec, double t);

void write_profile(const std::filesystem::path& stem, const OdeProfile& profile);

}  // namespace wavelab
