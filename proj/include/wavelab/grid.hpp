#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <memory>
#include <numbers>

namespace wavelab {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Periodic box [-L/2, L/2)^dim sampled with N points per axis, x_j = -L/2 + j L/N.
// L defaults to 2 pi; other periods are used for local patches.
class TorusGrid {
public:
    TorusGrid() = default;
    TorusGrid(int dim, int points_per_axis, double period = two_pi);

    int dim() const { return dim_; }
    int points_per_axis() const { return n_; }
    double period() const { return period_; }

    std::size_t size() const;
    // r2c half layout: last axis keeps N/2+1 entries.
    std::size_t spectrum_size() const;
    int half_points() const { return n_ / 2 + 1; }

    double spacing() const { return period_ / n_; }
    double coordinate(int j) const { return -0.5 * period_ + j * spacing(); }
    double wavenumber_unit() const { return two_pi / period_; }
    double cell_volume() const;
    double volume() const;

    // Physical position of a flat (row-major) sample index; unused axes are 0.
    Eigen::Vector3d point(std::size_t index) const;

    bool operator==(const TorusGrid& other) const = default;

private:
    int dim_ = 1;
    int n_ = 16;
    double period_ = two_pi;
};

void require_same_grid(const TorusGrid& a, const TorusGrid& b);

// Axis-aligned box; only the first dim components are used.
struct Box {
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    Eigen::Vector3d half_width = Eigen::Vector3d::Zero();
};

// Signed offset x - c reduced to [-L/2, L/2).
double periodic_offset(double x, double c, double period);

// Lattice frequency of index j along an axis of N points (j <= N/2 maps to j).
inline int lattice_frequency(int j, int n) { return j <= n / 2 ? j : j - n; }

// Per-grid tables over the half spectrum, computed once and shared.
struct SpectralGeometry {
    Eigen::ArrayXd k2;            // physical |k|^2
    Eigen::ArrayXd lattice2;      // integer |n|^2
    Eigen::ArrayXd multiplicity;  // 2 where the conjugate partner is not stored
    Eigen::ArrayXd phase;         // (-1)^(n_1+...+n_d), shifts the origin to x = 0
    Eigen::Array<int, Eigen::Dynamic, 3> lattice;  // integer frequency vector
    Eigen::Array<bool, Eigen::Dynamic, 1> has_nyquist;
};

std::shared_ptr<const SpectralGeometry> spectral_geometry(const TorusGrid& grid);

}  // namespace wavelab
