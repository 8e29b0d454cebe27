#pragma once

#include <wavelab/field.hpp>

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include <json.hpp>

namespace wavelab {

// a cos(k.x) + b sin(k.x) with k = (2 pi / L) m.
struct TrigMode {
    std::array<int, 3> m{0, 0, 0};
    double a = 0.0;
    double b = 0.0;
};

struct RandomizationSpec {
    double a0 = 0.0;
    std::vector<TrigMode> modes;
    std::uint64_t seed = 0;
};

// Generator for sample `index` of a spec: independent streams from one base seed.
std::mt19937_64 derived_generator(std::uint64_t seed, std::uint64_t index);

// u = a0 alpha0 + sum (a alpha cos + b beta sin); draws in the order alpha0, then
// (alpha, beta) per mode.
GridField sample_randomized_field(const RandomizationSpec& spec, const TorusGrid& grid, std::uint64_t index = 0);

// Deterministic field with all Gaussians replaced by 1.
GridField trig_field(const RandomizationSpec& spec, const TorusGrid& grid);

struct MomentEstimate {
    int q = 4;
    long long sample_count = 0;
    double mean = 0.0;
    double std_error = 0.0;
};

// Monte Carlo estimate of E |u|_{L^q}^q for even q >= 2 (samples >= 100).
MomentEstimate mc_lq_moment(const RandomizationSpec& spec, const TorusGrid& grid, int q, long long samples,
                            int threads = 1);

// c_q int sigma(x)^q dx with c_4 = 3, c_6 = 15 (grid quadrature).
double wick_oracle_moment(const RandomizationSpec& spec, const TorusGrid& grid, int q);

nlohmann::json to_json(const MomentEstimate& est, double oracle);

bool gm_membership(const SpectrumField& f, long long M, double q);

// l^2 mass a0^2 + sum (a^2 + b^2) / 2
double coefficient_mass(const RandomizationSpec& spec);

// Random coefficients on `modes` distinct frequencies with |m_i| <= max_freq,
// rescaled to unit mass when `unit_mass` is set.
RandomizationSpec random_spec(int dim, int modes, int max_freq, std::uint64_t seed, bool unit_mass);

}  // namespace wavelab
