#include <wavelab/field.hpp>
#include <wavelab/grid.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace wavelab {

TorusGrid::TorusGrid(int dim, int points_per_axis, double period)
    : dim_(dim), n_(points_per_axis), period_(period)
{
    if (dim < 1 || dim > 3) throw ConfigurationError("grid dimension must be 1, 2 or 3");
    if (points_per_axis < 4 || (points_per_axis & (points_per_axis - 1)) != 0)
        throw ConfigurationError("points per axis must be a power of two >= 4, got " +
                                 std::to_string(points_per_axis));
    if (!(period > 0.0) || !std::isfinite(period))
        throw ConfigurationError("grid period must be positive");
}

std::size_t TorusGrid::size() const
{
    std::size_t s = 1;
    for (int a = 0; a < dim_; ++a) s *= static_cast<std::size_t>(n_);
    return s;
}

std::size_t TorusGrid::spectrum_size() const
{
    return size() / static_cast<std::size_t>(n_) * static_cast<std::size_t>(half_points());
}

double TorusGrid::cell_volume() const { return std::pow(spacing(), dim_); }

double TorusGrid::volume() const { return std::pow(period_, dim_); }

Eigen::Vector3d TorusGrid::point(std::size_t index) const
{
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    for (int a = dim_ - 1; a >= 0; --a) {
        x[a] = coordinate(static_cast<int>(index % static_cast<std::size_t>(n_)));
        index /= static_cast<std::size_t>(n_);
    }
    return x;
}

void require_same_grid(const TorusGrid& a, const TorusGrid& b)
{
    if (!(a == b)) throw GridMismatchError("fields live on different grids");
}

double periodic_offset(double x, double c, double period)
{
    double d = std::fmod(x - c + 0.5 * period, period);
    if (d < 0) d += period;
    return d - 0.5 * period;
}

namespace {

std::shared_ptr<const SpectralGeometry> build_geometry(const TorusGrid& g)
{
    auto geo = std::make_shared<SpectralGeometry>();
    const int n = g.points_per_axis();
    const int h = g.half_points();
    const int d = g.dim();
    const auto m = static_cast<Eigen::Index>(g.spectrum_size());
    const double unit = g.wavenumber_unit();
    geo->k2.resize(m);
    geo->lattice2.resize(m);
    geo->multiplicity.resize(m);
    geo->phase.resize(m);
    geo->lattice.resize(m, 3);
    geo->has_nyquist.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        int idx[3] = {0, 0, 0};
        auto rest = static_cast<std::size_t>(i);
        idx[d - 1] = static_cast<int>(rest % static_cast<std::size_t>(h));
        rest /= static_cast<std::size_t>(h);
        for (int a = d - 2; a >= 0; --a) {
            idx[a] = static_cast<int>(rest % static_cast<std::size_t>(n));
            rest /= static_cast<std::size_t>(n);
        }
        double l2 = 0.0;
        int parity = 0;
        bool nyq = false;
        for (int a = 0; a < 3; ++a) {
            const int f = a < d ? lattice_frequency(idx[a], n) : 0;
            geo->lattice(i, a) = f;
            l2 += static_cast<double>(f) * f;
            parity += f;
            nyq = nyq || (a < d && f == n / 2);
        }
        geo->lattice2[i] = l2;
        geo->k2[i] = unit * unit * l2;
        geo->phase[i] = (parity % 2 == 0) ? 1.0 : -1.0;
        const int last = idx[d - 1];
        geo->multiplicity[i] = (last == 0 || last == n / 2) ? 1.0 : 2.0;
        geo->has_nyquist[i] = nyq;
    }
    return geo;
}

}  // namespace

std::shared_ptr<const SpectralGeometry> spectral_geometry(const TorusGrid& grid)
{
    using Key = std::tuple<int, int, double>;
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const SpectralGeometry>> cache;
    const Key key{grid.dim(), grid.points_per_axis(), grid.period()};
    std::lock_guard lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto geo = build_geometry(grid);
    cache.emplace(key, geo);
    return geo;
}

Eigen::ArrayXd tabulate_multiplier(const TorusGrid& grid, const WavevectorFunction& m)
{
    const auto geo = spectral_geometry(grid);
    const double unit = grid.wavenumber_unit();
    Eigen::ArrayXd out(geo->k2.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        const Eigen::Vector3d k = unit * geo->lattice.row(i).cast<double>().matrix().transpose();
        out[i] = m(k);
    }
    return out;
}

}  // namespace wavelab
