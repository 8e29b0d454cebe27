#pragma once

#include <wavelab/wave_state.hpp>

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace wavelab {

struct SolverConfig {
    double dt = 1e-3;
    double p = 3.0;
    int padding_factor = 2;
    bool nonlinear = true;
    double blowup_factor = 1e6;  // cap on sup|u| relative to the initial sup|u|
};

void validate(const SolverConfig& cfg);

// period(p) / (64 A^{(p-1)/2})
double default_time_step(double p, double peak_amplitude);

WaveState linear_flow(const WaveState& state, double t);

// ut <- ut - tau |u|^{p-1} u, evaluated on a grid oversampled by `padding` and
// truncated back (Nyquist modes dropped when padding > 1).
WaveState nonlinear_substep(const WaveState& state, double tau, double p, int padding = 1);

WaveState strang_step(const WaveState& state, const SolverConfig& cfg);

enum class EvolveStatus { ok, blowup };
std::string to_string(EvolveStatus status);

struct EvolveResult {
    WaveState final_state;
    EvolveStatus status = EvolveStatus::ok;
    long long steps = 0;
};

// Called at each sample time with the state and the sample's index.
using SampleObserver = std::function<void(const WaveState&, std::size_t)>;

// Evolve to T = m dt, calling `observe` at each requested sample time (each must be a
// multiple of dt). Stops early and flags blow-up when sup|u| exceeds the cap.
EvolveResult evolve(const WaveState& initial, double T, const SolverConfig& cfg,
                    const std::vector<double>& sample_times, const SampleObserver& observe);

struct Trajectory {
    std::vector<WaveState> states;
    EvolveStatus status = EvolveStatus::ok;
};

Trajectory evolve(const WaveState& initial, double T, const SolverConfig& cfg,
                  const std::vector<double>& sample_times);

// time-reversed state (u, -ut)
WaveState reverse_velocity(const WaveState& state);

// Pointwise linear energy density (ut^2 + |grad u|^2) / 2.
GridField energy_density(const WaveState& state);

double linear_energy(const WaveState& state);
double hamiltonian(const WaveState& state, double p);

// Fraction of linear energy outside the union of boxes enlarged by `enlargement`
// (default t + 3 grid cells).
double light_cone_leakage(const WaveState& state, const std::vector<Box>& support0, double t,
                          std::optional<double> enlargement = std::nullopt);

bool inside_boxes(const Eigen::Vector3d& x, const std::vector<Box>& boxes, double enlargement,
                  const TorusGrid& grid);

struct Diagnostics {
    double time = 0.0;
    double l2 = 0.0;
    double hs = 0.0;
    double h1 = 0.0;
    double linf = 0.0;
    double hamiltonian = 0.0;
    double leakage = 0.0;
};

Diagnostics diagnostics(const WaveState& state, double s, double p, const std::vector<Box>& support0);

void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<Diagnostics>& rows);

}  // namespace wavelab
