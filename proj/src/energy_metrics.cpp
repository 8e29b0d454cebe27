#include <wavelab/bump.hpp>
#include <wavelab/energy_metrics.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>

namespace wavelab {

double semiclassical_energy(const WaveState& state, const SemiclassicalWeights& w)
{
    if (!(w.n > 0.0)) throw DomainError("semiclassical_energy: n must be positive");
    const auto geo = spectral_geometry(state.grid());
    const SpectrumField u = forward_transform(state.u);
    const SpectrumField ut = forward_transform(state.ut);
    const Eigen::ArrayXd bracket2 = 1.0 + geo->k2;
    const double low = weighted_energy(ut, Eigen::ArrayXd::Ones(geo->k2.size())) + weighted_energy(u, geo->k2);
    const double high = weighted_energy(ut, bracket2) + weighted_energy(u, geo->k2 * bracket2);
    return std::pow(w.n, -w.q2) * std::sqrt(low) + std::pow(w.n, -w.q2 - 1.0) * std::sqrt(high);
}

void EnergyTrace::push(double t, double energy, double hs_norm)
{
    times_.push_back(t);
    energies_.push_back(energy);
    running_sup_.push_back(running_sup_.empty() ? energy : std::max(running_sup_.back(), energy));
    hs_.push_back(hs_norm);
}

void EnergyTrace::write_csv(const std::filesystem::path& path) const
{
    std::ofstream out(path);
    out << "t,E_n,e_n,w_hs\n" << std::setprecision(17);
    for (std::size_t i = 0; i < times_.size(); ++i)
        out << times_[i] << ',' << energies_[i] << ',' << running_sup_[i] << ',' << hs_[i] << '\n';
}

double hs_state_norm(const WaveState& a, double s)
{
    const double nu = sobolev_norm(forward_transform(a.u), s);
    const double nut = sobolev_norm(forward_transform(a.ut), s - 1.0);
    return std::sqrt(nu * nu + nut * nut);
}

double hs_distance(const WaveState& a, const WaveState& b, double s)
{
    require_same_grid(a.grid(), b.grid());
    return hs_state_norm(WaveState(a.u - b.u, a.ut - b.ut), s);
}

namespace {

bool covers_domain(const Box& box, const TorusGrid& g)
{
    for (int a = 0; a < g.dim(); ++a)
        if (box.half_width[a] < 0.5 * g.period()) return false;
    return true;
}

}  // namespace

GridField box_cutoff(const Box& box, const TorusGrid& g)
{
    if (covers_domain(box, g)) return sample(g, [](const Eigen::Vector3d&) { return 1.0; });
    for (int a = 0; a < g.dim(); ++a) {
        if (!(box.half_width[a] > 0.0)) throw DomainError("localized norm: box has empty extent");
        const double lo = box.center[a] - 1.2 * box.half_width[a];
        const double hi = box.center[a] + 1.2 * box.half_width[a];
        if (lo <= -0.5 * g.period() || hi >= 0.5 * g.period())
            throw DomainError("localized norm: enlarged box touches the periodic boundary");
    }
    return sample(g, [&](const Eigen::Vector3d& x) {
        double eta = 1.0;
        for (int a = 0; a < g.dim(); ++a)
            eta *= smooth_plateau(x[a] - box.center[a], box.half_width[a], 1.2 * box.half_width[a]);
        return eta;
    });
}

double localized_hs_norm(const GridField& f, double s, const Box& box)
{
    if (!(s > 0.0 && s < 1.0)) throw DomainError("localized_hs_norm: s must lie in (0, 1)");
    const GridField eta = box_cutoff(box, f.grid);
    return sobolev_norm(forward_transform(GridField(f.grid, eta.samples * f.samples)), s);
}

std::pair<double, double> interpolation_bound_check(const GridField& f, double s0, double s1, double theta)
{
    if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("interpolation_bound_check: theta must lie in [0, 1]");
    const SpectrumField fh = forward_transform(f);
    const double lhs = sobolev_norm(fh, (1.0 - theta) * s0 + theta * s1);
    const double a = sobolev_norm(fh, s0), b = sobolev_norm(fh, s1);
    double rhs;
    if (theta == 0.0) rhs = a;
    else if (theta == 1.0) rhs = b;
    else rhs = std::pow(a, 1.0 - theta) * std::pow(b, theta);
    return {lhs, rhs};
}

}  // namespace wavelab
