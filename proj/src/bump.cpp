#include <wavelab/bump.hpp>
#include <wavelab/quadrature.hpp>

#include <cmath>
#include <numbers>

namespace wavelab {

std::string to_string(BumpShape shape)
{
    switch (shape) {
    case BumpShape::exponential_bump: return "exponential_bump";
    case BumpShape::cosine_power: return "cosine_power";
    case BumpShape::polynomial_cutoff: return "polynomial_cutoff";
    case BumpShape::plateau: return "plateau";
    }
    return "unknown";
}

BumpShape parse_bump_shape(const std::string& name)
{
    if (name == "exponential_bump") return BumpShape::exponential_bump;
    if (name == "cosine_power") return BumpShape::cosine_power;
    if (name == "polynomial_cutoff") return BumpShape::polynomial_cutoff;
    if (name == "plateau") return BumpShape::plateau;
    throw ConfigurationError("unknown bump shape '" + name + "'");
}

double smooth_step(double x)
{
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

double smooth_plateau(double x, double a, double b)
{
    const double r = std::abs(x);
    if (r <= a) return 1.0;
    if (r >= b) return 0.0;
    return smooth_step((b - r) / (b - a));
}

namespace {

double smooth_step_derivative(double x)
{
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    const double da = a / (x * x);
    const double db = -b / ((1.0 - x) * (1.0 - x));
    return (da * (a + b) - a * (da + db)) / ((a + b) * (a + b));
}

}  // namespace

double bump_profile(BumpShape shape, double m, double r)
{
    if (r >= 1.0) return 0.0;
    switch (shape) {
    case BumpShape::exponential_bump: return std::exp(-1.0 / (1.0 - r * r));
    case BumpShape::cosine_power: return std::pow(std::cos(0.5 * std::numbers::pi * r), m);
    case BumpShape::polynomial_cutoff: return std::pow(1.0 - r * r, m);
    case BumpShape::plateau: return r <= 0.5 ? 1.0 : smooth_step(2.0 * (1.0 - r));
    }
    return 0.0;
}

double bump_profile_derivative(BumpShape shape, double m, double r)
{
    if (r >= 1.0) return 0.0;
    switch (shape) {
    case BumpShape::exponential_bump: {
        const double w = 1.0 - r * r;
        return std::exp(-1.0 / w) * (-2.0 * r / (w * w));
    }
    case BumpShape::cosine_power: {
        const double a = 0.5 * std::numbers::pi * r;
        return -m * 0.5 * std::numbers::pi * std::pow(std::cos(a), m - 1.0) * std::sin(a);
    }
    case BumpShape::polynomial_cutoff: return -2.0 * m * r * std::pow(1.0 - r * r, m - 1.0);
    case BumpShape::plateau: return r <= 0.5 ? 0.0 : -2.0 * smooth_step_derivative(2.0 * (1.0 - r));
    }
    return 0.0;
}

double bump_value(const BumpSpec& spec, const Eigen::Vector3d& x, double period)
{
    double r2 = 0.0;
    for (int a = 0; a < spec.dim; ++a) {
        const double d = periodic_offset(x[a], spec.center[a], period);
        r2 += d * d;
    }
    return bump_profile(spec.shape, spec.exponent, std::sqrt(r2) / spec.support_radius);
}

void require_resolved(double radius, const TorusGrid& grid, const std::string& what)
{
    const double across = 2.0 * radius / grid.spacing();
    if (across < 8.0)
        throw ResolutionError(what + ": support spans " + std::to_string(across) +
                              " grid points, need at least 8");
}

GridField make_bump(const BumpSpec& spec, const TorusGrid& grid)
{
    if (spec.dim != grid.dim()) throw ConfigurationError("make_bump: bump and grid dimension differ");
    if (!(spec.support_radius > 0.0)) throw DomainError("make_bump: support radius must be positive");
    if (2.0 * spec.support_radius >= grid.period())
        throw DomainError("make_bump: support does not fit in the fundamental domain");
    require_resolved(spec.support_radius, grid, "make_bump");
    return sample(grid, [&](const Eigen::Vector3d& x) { return bump_value(spec, x, grid.period()); });
}

double sphere_area(int dim)
{
    switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: throw DomainError("sphere_area: dimension must be 1, 2 or 3");
    }
}

double bump_lq_norm(const BumpSpec& spec, double q)
{
    if (!(q >= 1.0)) throw DomainError("bump_lq_norm: q must be >= 1");
    const int d = spec.dim;
    const double radial = integrate(
        [&](double r) { return std::pow(bump_profile(spec.shape, spec.exponent, r), q) * std::pow(r, d - 1); },
        0.0, 1.0, 128, 20);
    return std::pow(sphere_area(d) * std::pow(spec.support_radius, d) * radial, 1.0 / q);
}

}  // namespace wavelab
