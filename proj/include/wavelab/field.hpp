#pragma once

#include <wavelab/error.hpp>
#include <wavelab/fft.hpp>
#include <wavelab/grid.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>

namespace wavelab {

template <typename Scalar>
struct BasicGridField {
    using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

    TorusGrid grid;
    Array samples;

    BasicGridField() = default;
    explicit BasicGridField(const TorusGrid& g) : grid(g), samples(Array::Zero(g.size())) {}
    BasicGridField(const TorusGrid& g, Array s) : grid(g), samples(std::move(s))
    {
        if (static_cast<std::size_t>(samples.size()) != grid.size())
            throw ConfigurationError("grid field: sample count does not match grid");
    }
};

// Coefficients u_hat over the r2c half spectrum, scaled so that
// u(x) = L^{-d/2} sum_n u_hat_n e^{i k_n . x} and sum |u_hat|^2 = ||u||_{L^2}^2.
template <typename Scalar>
struct BasicSpectrumField {
    using Complex = std::complex<Scalar>;
    using Array = Eigen::Array<Complex, Eigen::Dynamic, 1>;

    TorusGrid grid;
    Array coefficients;

    BasicSpectrumField() = default;
    explicit BasicSpectrumField(const TorusGrid& g)
        : grid(g), coefficients(Array::Zero(g.spectrum_size())) {}
    BasicSpectrumField(const TorusGrid& g, Array c) : grid(g), coefficients(std::move(c))
    {
        if (static_cast<std::size_t>(coefficients.size()) != grid.spectrum_size())
            throw ConfigurationError("spectrum field: coefficient count does not match grid");
    }
};

using GridField = BasicGridField<double>;
using SpectrumField = BasicSpectrumField<double>;
using GridFieldF = BasicGridField<float>;
using SpectrumFieldF = BasicSpectrumField<float>;

template <typename Scalar>
BasicGridField<Scalar> operator+(const BasicGridField<Scalar>& a, const BasicGridField<Scalar>& b)
{
    require_same_grid(a.grid, b.grid);
    return {a.grid, a.samples + b.samples};
}

template <typename Scalar>
BasicGridField<Scalar> operator-(const BasicGridField<Scalar>& a, const BasicGridField<Scalar>& b)
{
    require_same_grid(a.grid, b.grid);
    return {a.grid, a.samples - b.samples};
}

template <typename Scalar>
BasicGridField<Scalar> operator*(Scalar c, const BasicGridField<Scalar>& a)
{
    return {a.grid, c * a.samples};
}

template <typename Scalar>
BasicSpectrumField<Scalar> operator+(const BasicSpectrumField<Scalar>& a,
                                     const BasicSpectrumField<Scalar>& b)
{
    require_same_grid(a.grid, b.grid);
    return {a.grid, a.coefficients + b.coefficients};
}

template <typename Scalar>
BasicSpectrumField<Scalar> operator-(const BasicSpectrumField<Scalar>& a,
                                     const BasicSpectrumField<Scalar>& b)
{
    require_same_grid(a.grid, b.grid);
    return {a.grid, a.coefficients - b.coefficients};
}

template <typename Scalar>
BasicSpectrumField<Scalar> operator*(Scalar c, const BasicSpectrumField<Scalar>& a)
{
    return {a.grid, c * a.coefficients};
}

// Sample a function of the physical position on the grid.
template <typename Scalar = double, typename F>
BasicGridField<Scalar> sample(const TorusGrid& grid, F&& f)
{
    BasicGridField<Scalar> out(grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        out.samples[static_cast<Eigen::Index>(i)] = static_cast<Scalar>(f(grid.point(i)));
    return out;
}

template <typename Scalar>
bool all_finite(const BasicGridField<Scalar>& f)
{
    return f.samples.isFinite().all();
}

template <typename Scalar>
BasicSpectrumField<Scalar> forward_transform(const BasicGridField<Scalar>& f)
{
    if (!all_finite(f))
        throw DomainError("forward_transform: field has non-finite samples");
    const TorusGrid& g = f.grid;
    BasicSpectrumField<Scalar> out(g);
    detail::FftTraits<Scalar>::forward(g.dim(), g.points_per_axis(), f.samples.data(),
                                       out.coefficients.data());
    const auto geo = spectral_geometry(g);
    const Scalar scale =
        static_cast<Scalar>(std::pow(g.period(), 0.5 * g.dim()) / static_cast<double>(g.size()));
    out.coefficients *= (scale * geo->phase.cast<Scalar>()).template cast<std::complex<Scalar>>();
    return out;
}

template <typename Scalar>
BasicGridField<Scalar> inverse_transform(const BasicSpectrumField<Scalar>& f)
{
    const TorusGrid& g = f.grid;
    const auto geo = spectral_geometry(g);
    const Scalar scale = static_cast<Scalar>(std::pow(g.period(), -0.5 * g.dim()));
    typename BasicSpectrumField<Scalar>::Array work =
        f.coefficients * (scale * geo->phase.cast<Scalar>()).template cast<std::complex<Scalar>>();
    BasicGridField<Scalar> out(g);
    detail::FftTraits<Scalar>::inverse(g.dim(), g.points_per_axis(), work.data(),
                                       out.samples.data());
    return out;
}

// sum over the full spectrum of w(n) |u_hat_n|^2 for an even weight w.
template <typename Scalar, typename Derived>
double weighted_energy(const BasicSpectrumField<Scalar>& f, const Eigen::ArrayBase<Derived>& weight)
{
    const auto geo = spectral_geometry(f.grid);
    return (geo->multiplicity * weight.derived() * f.coefficients.abs2().template cast<double>())
        .sum();
}

inline Eigen::ArrayXd japanese_bracket_power(const TorusGrid& grid, double power)
{
    const auto geo = spectral_geometry(grid);
    return (1.0 + geo->k2).pow(0.5 * power);
}

template <typename Scalar>
double sobolev_norm(const BasicSpectrumField<Scalar>& f, double s)
{
    if (s == 0.0) {
        const auto geo = spectral_geometry(f.grid);
        return std::sqrt((geo->multiplicity * f.coefficients.abs2().template cast<double>()).sum());
    }
    return std::sqrt(weighted_energy(f, japanese_bracket_power(f.grid, 2.0 * s)));
}

template <typename Scalar>
double lebesgue_norm(const BasicGridField<Scalar>& f, double q)
{
    if (!(q >= 1.0)) throw DomainError("lebesgue_norm: q must be >= 1");
    const double dv = f.grid.cell_volume();
    const Eigen::ArrayXd a = f.samples.template cast<double>().abs();
    if (q == 2.0) return std::sqrt(dv * a.square().sum());
    return std::pow(dv * a.pow(q).sum(), 1.0 / q);
}

template <typename Scalar>
double sup_norm(const BasicGridField<Scalar>& f)
{
    return f.samples.size() == 0 ? 0.0 : static_cast<double>(f.samples.abs().maxCoeff());
}

// Coefficientwise product with a real multiplier given on the half spectrum.
template <typename Scalar, typename Derived>
BasicSpectrumField<Scalar> apply_multiplier(const BasicSpectrumField<Scalar>& f,
                                            const Eigen::ArrayBase<Derived>& m)
{
    if (m.size() != f.coefficients.size())
        throw ConfigurationError("apply_multiplier: table size does not match spectrum");
    return {f.grid, f.coefficients * m.derived().template cast<Scalar>().template cast<std::complex<Scalar>>()};
}

// Multiplier as a function of the physical wavevector k (unused axes are 0).
using WavevectorFunction = std::function<double(const Eigen::Vector3d&)>;

Eigen::ArrayXd tabulate_multiplier(const TorusGrid& grid, const WavevectorFunction& m);

template <typename Scalar>
BasicSpectrumField<Scalar> apply_multiplier(const BasicSpectrumField<Scalar>& f,
                                            const WavevectorFunction& m)
{
    return apply_multiplier(f, tabulate_multiplier(f.grid, m));
}

// d/dx_axis; the Nyquist plane of that axis is dropped so the result stays real.
template <typename Scalar>
BasicSpectrumField<Scalar> partial_derivative(const BasicSpectrumField<Scalar>& f, int axis)
{
    const TorusGrid& g = f.grid;
    if (axis < 0 || axis >= g.dim()) throw DomainError("partial_derivative: bad axis");
    const auto geo = spectral_geometry(g);
    const int nyq = g.points_per_axis() / 2;
    const double unit = g.wavenumber_unit();
    BasicSpectrumField<Scalar> out(g);
    for (Eigen::Index i = 0; i < f.coefficients.size(); ++i) {
        const int n = geo->lattice(i, axis);
        if (n == nyq) continue;
        out.coefficients[i] =
            f.coefficients[i] * std::complex<Scalar>(0, static_cast<Scalar>(unit * n));
    }
    return out;
}

// Zero all modes with integer |n| > M.
template <typename Scalar>
BasicSpectrumField<Scalar> low_pass(const BasicSpectrumField<Scalar>& f, long long M)
{
    if (M < 0) throw DomainError("low_pass: M must be >= 0");
    const auto geo = spectral_geometry(f.grid);
    const double m2 = static_cast<double>(M) * static_cast<double>(M);
    return apply_multiplier(f, (geo->lattice2 <= m2).template cast<double>());
}

// Largest violation of c(-n) = conj(c(n)) inside the self-conjugate planes of the
// half layout (the only place the storage cannot enforce it).
template <typename Scalar>
double hermitian_defect(const BasicSpectrumField<Scalar>& f)
{
    const TorusGrid& g = f.grid;
    const int n = g.points_per_axis();
    const int h = g.half_points();
    const int d = g.dim();
    double worst = 0.0;
    auto index_of = [&](int a, int b, int c) -> Eigen::Index {
        if (d == 1) return c;
        if (d == 2) return static_cast<Eigen::Index>(b) * h + c;
        return (static_cast<Eigen::Index>(a) * n + b) * h + c;
    };
    auto neg = [n](int j) { return j == 0 ? 0 : n - j; };
    const int na = d == 3 ? n : 1;
    const int nb = d >= 2 ? n : 1;
    for (int c : {0, n / 2}) {
        for (int a = 0; a < na; ++a) {
            for (int b = 0; b < nb; ++b) {
                const auto z = f.coefficients[index_of(a, b, c)];
                const auto w = f.coefficients[index_of(d == 3 ? neg(a) : 0, d >= 2 ? neg(b) : 0, c)];
                worst = std::max(worst, static_cast<double>(std::abs(z - std::conj(w))));
            }
        }
    }
    return worst;
}

}  // namespace wavelab
