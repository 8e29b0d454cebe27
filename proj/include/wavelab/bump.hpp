#pragma once

#include <wavelab/field.hpp>

#include <Eigen/Dense>
#include <string>

namespace wavelab {

enum class BumpShape {
    exponential_bump,   // exp(-1/(1-r^2))
    cosine_power,       // cos(pi r / 2)^m
    polynomial_cutoff,  // (1-r^2)^m, only C^{m-1}
    plateau,            // 1 on r <= 1/2, smooth step down to 0 at r = 1
};

std::string to_string(BumpShape shape);
BumpShape parse_bump_shape(const std::string& name);

struct BumpSpec {
    int dim = 3;
    BumpShape shape = BumpShape::exponential_bump;
    double support_radius = 1.0;
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    double exponent = 8.0;  // m for cosine_power and polynomial_cutoff
};

// C-infinity step: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x);

// Smooth cutoff in one variable: 1 on |x| <= a, 0 on |x| >= b.
double smooth_plateau(double x, double a, double b);

// Radial profile f(r) of the unit bump and its derivative df/dr.
double bump_profile(BumpShape shape, double exponent, double r);
double bump_profile_derivative(BumpShape shape, double exponent, double r);

// Value of the bump at a physical point, with periodic minimal-image offsets.
double bump_value(const BumpSpec& spec, const Eigen::Vector3d& x, double period);

GridField make_bump(const BumpSpec& spec, const TorusGrid& grid);

// ||bump||_{L^q(R^d)} by radial quadrature (independent of any grid).
double bump_lq_norm(const BumpSpec& spec, double q);

// |S^{d-1}|
double sphere_area(int dim);

// Points across a support of the given radius must be >= 8.
void require_resolved(double radius, const TorusGrid& grid, const std::string& what);

}  // namespace wavelab
