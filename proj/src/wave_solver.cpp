#include <wavelab/ode_profile.hpp>
#include <wavelab/wave_solver.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <tuple>

namespace wavelab {

void validate(const SolverConfig& cfg)
{
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigurationError("solver dt must be positive");
    if (!(cfg.p >= 3.0 && cfg.p < 5.0)) throw ConfigurationError("solver p must lie in [3, 5)");
    if (cfg.padding_factor < 1 || cfg.padding_factor > 3)
        throw ConfigurationError("padding factor must be 1, 2 or 3");
    if (!(cfg.blowup_factor > 1.0)) throw ConfigurationError("blow-up factor must exceed 1");
}

double default_time_step(double p, double peak_amplitude)
{
    const double a = std::max(peak_amplitude, 1e-300);
    return cached_profile(p).period / (64.0 * std::pow(a, 0.5 * (p - 1.0)));
}

std::string to_string(EvolveStatus status) { return status == EvolveStatus::ok ? "ok" : "numerical blow-up"; }

namespace {

using Complex = std::complex<double>;

// Maps between the half spectrum of an N-grid and that of a padded M-grid.
struct ResampleMap {
    int dim = 1, n = 0, m = 0;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> regular;
    std::vector<std::tuple<Eigen::Index, Eigen::Index, double>> split;

    ResampleMap(int d, int n_coarse, int factor) : dim(d), n(n_coarse), m(n_coarse * factor)
    {
        const int hc = n / 2 + 1, hf = m / 2 + 1;
        const int na = d == 3 ? n : 1, nb = d >= 2 ? n : 1;
        auto targets = [&](int i) {
            const int f = lattice_frequency(i, n);
            if (f == n / 2) return std::vector<int>{n / 2, m - n / 2};
            return std::vector<int>{f >= 0 ? f : m + f};
        };
        for (int a = 0; a < na; ++a)
            for (int b = 0; b < nb; ++b)
                for (int c = 0; c < hc; ++c) {
                    const Eigen::Index coarse =
                        d == 1 ? c : d == 2 ? static_cast<Eigen::Index>(b) * hc + c
                                            : (static_cast<Eigen::Index>(a) * n + b) * hc + c;
                    const auto ta = d == 3 ? targets(a) : std::vector<int>{0};
                    const auto tb = d >= 2 ? targets(b) : std::vector<int>{0};
                    const bool nyq_c = c == n / 2;
                    const int nyq = (ta.size() > 1) + (tb.size() > 1) + nyq_c;
                    const double w = std::ldexp(1.0, -nyq);
                    for (int fa : ta)
                        for (int fb : tb) {
                            const Eigen::Index fine =
                                d == 1 ? c : d == 2 ? static_cast<Eigen::Index>(fb) * hf + c
                                                    : (static_cast<Eigen::Index>(fa) * m + fb) * hf + c;
                            if (nyq == 0) regular.emplace_back(coarse, fine);
                            else split.emplace_back(coarse, fine, w);
                        }
                }
    }
};

std::size_t cube(int d, int n)
{
    std::size_t s = 1;
    for (int a = 0; a < d; ++a) s *= static_cast<std::size_t>(n);
    return s;
}

class Propagator {
public:
    Propagator(const TorusGrid& grid, int padding)
        : grid_(grid), geo_(spectral_geometry(grid)), padding_(padding)
    {
        kabs_ = geo_->k2.sqrt();
        const double ld2 = std::pow(grid.period(), 0.5 * grid.dim());
        to_raw_ = geo_->phase / ld2;
        from_raw_ = geo_->phase * ld2;
        const int m = grid.points_per_axis() * padding;
        fine_points_ = m;
        fine_real_.resize(static_cast<Eigen::Index>(cube(grid.dim(), m)));
        fine_spec_.resize(static_cast<Eigen::Index>(cube(grid.dim(), m) / m * (m / 2 + 1)));
        if (padding > 1) map_ = std::make_unique<ResampleMap>(grid.dim(), grid.points_per_axis(), padding);
    }

    void linear(SpectrumField& u, SpectrumField& ut, double t) const
    {
        const Eigen::ArrayXd arg = t * kabs_;
        const Eigen::ArrayXd c = arg.cos();
        const Eigen::ArrayXd sn = arg.sin();
        const Eigen::ArrayXd sdk = (kabs_ > 0.0).select(sn / kabs_, t);
        const Eigen::ArrayXd ksn = -kabs_ * sn;
        const SpectrumField::Array u0 = u.coefficients;
        u.coefficients = c.cast<Complex>() * u0 + sdk.cast<Complex>() * ut.coefficients;
        ut.coefficients = ksn.cast<Complex>() * u0 + c.cast<Complex>() * ut.coefficients;
    }

    // |u|^{p-1} u projected back to the grid spectrum; returns sup|u| on the evaluation grid.
    double nonlinearity(const SpectrumField& u, double p, SpectrumField& out)
    {
        const int d = grid_.dim();
        const int m = fine_points_;
        if (padding_ == 1) {
            fine_spec_ = u.coefficients * to_raw_.cast<Complex>();
        } else {
            fine_spec_.setZero();
            for (const auto& [c, f] : map_->regular) fine_spec_[f] = u.coefficients[c] * to_raw_[c];
            for (const auto& [c, f, w] : map_->split) fine_spec_[f] += w * u.coefficients[c] * to_raw_[c];
        }
        detail::FftTraits<double>::inverse(d, m, fine_spec_.data(), fine_real_.data());
        const double sup = fine_real_.abs().maxCoeff();
        if (p == 3.0) fine_real_ = fine_real_.square() * fine_real_;
        else fine_real_ = fine_real_.abs().pow(p - 1.0) * fine_real_;
        detail::FftTraits<double>::forward(d, m, fine_real_.data(), fine_spec_.data());
        const double norm = 1.0 / static_cast<double>(fine_real_.size());
        out.grid = grid_;
        if (padding_ == 1) {
            out.coefficients = fine_spec_ * (norm * from_raw_).cast<Complex>();
        } else {
            out.coefficients.setZero(static_cast<Eigen::Index>(grid_.spectrum_size()));
            for (const auto& [c, f] : map_->regular) out.coefficients[c] = fine_spec_[f] * (norm * from_raw_[c]);
        }
        return sup;
    }

private:
    TorusGrid grid_;
    std::shared_ptr<const SpectralGeometry> geo_;
    int padding_;
    int fine_points_ = 0;
    Eigen::ArrayXd kabs_, to_raw_, from_raw_;
    Eigen::ArrayXd fine_real_;
    SpectrumField::Array fine_spec_;
    std::unique_ptr<ResampleMap> map_;
};

long long step_index(double t, double dt, double T)
{
    const double k = std::round(t / dt);
    if (std::abs(k * dt - t) > 1e-9 * std::max(1.0, std::abs(T)))
        throw DomainError("evolve: time " + std::to_string(t) + " is not a multiple of dt");
    return static_cast<long long>(k);
}

}  // namespace

WaveState linear_flow(const WaveState& state, double t)
{
    Propagator prop(state.grid(), 1);
    SpectrumField u = forward_transform(state.u);
    SpectrumField ut = forward_transform(state.ut);
    prop.linear(u, ut, t);
    return {inverse_transform(u), inverse_transform(ut), state.time + t};
}

WaveState nonlinear_substep(const WaveState& state, double tau, double p, int padding)
{
    if (padding < 1 || padding > 3) throw ConfigurationError("padding factor must be 1, 2 or 3");
    WaveState out = state;
    if (padding == 1) {
        const auto& u = state.u.samples;
        out.ut.samples -= tau * (u.abs().pow(p - 1.0) * u);
        return out;
    }
    Propagator prop(state.grid(), padding);
    SpectrumField f;
    prop.nonlinearity(forward_transform(state.u), p, f);
    out.ut = state.ut - tau * inverse_transform(f);
    return out;
}

WaveState strang_step(const WaveState& state, const SolverConfig& cfg)
{
    validate(cfg);
    Propagator prop(state.grid(), cfg.padding_factor);
    SpectrumField u = forward_transform(state.u);
    SpectrumField ut = forward_transform(state.ut);
    SpectrumField f;
    if (cfg.nonlinear) {
        prop.nonlinearity(u, cfg.p, f);
        ut = ut - 0.5 * cfg.dt * f;
    }
    prop.linear(u, ut, cfg.dt);
    if (cfg.nonlinear) {
        prop.nonlinearity(u, cfg.p, f);
        ut = ut - 0.5 * cfg.dt * f;
    }
    return {inverse_transform(u), inverse_transform(ut), state.time + cfg.dt};
}

EvolveResult evolve(const WaveState& initial, double T, const SolverConfig& cfg,
                    const std::vector<double>& sample_times, const SampleObserver& observe)
{
    validate(cfg);
    if (T < 0.0) throw DomainError("evolve: T must be nonnegative");
    const long long steps = step_index(T, cfg.dt, T);
    std::vector<long long> marks;
    for (double t : sample_times) {
        const long long k = step_index(t, cfg.dt, T);
        if (k < 0 || k > steps) throw DomainError("evolve: sample time outside [0, T]");
        marks.push_back(k);
    }
    std::vector<std::vector<std::size_t>> at(static_cast<std::size_t>(steps + 1));
    for (std::size_t i = 0; i < marks.size(); ++i) at[static_cast<std::size_t>(marks[i])].push_back(i);

    const TorusGrid grid = initial.grid();
    Propagator prop(grid, cfg.padding_factor);
    SpectrumField u = forward_transform(initial.u);
    SpectrumField ut = forward_transform(initial.ut);
    SpectrumField f;
    const double sup0 = sup_norm(initial.u);
    const double cap = cfg.blowup_factor * (sup0 > 0.0 ? sup0 : 1.0);
    const double t0 = initial.time;
    const double half = 0.5 * cfg.dt;

    EvolveResult result;
    auto emit = [&](long long k) {
        if (!observe || at[static_cast<std::size_t>(k)].empty()) return;
        const WaveState s(inverse_transform(u), inverse_transform(ut), t0 + static_cast<double>(k) * cfg.dt);
        for (std::size_t idx : at[static_cast<std::size_t>(k)]) observe(s, idx);
    };
    auto kick = [&](double tau) {
        if (!cfg.nonlinear) return true;
        const double sup = prop.nonlinearity(u, cfg.p, f);
        if (!(sup <= cap)) return false;
        ut.coefficients -= tau * f.coefficients;
        return true;
    };

    emit(0);
    bool ok = steps == 0 || kick(half);
    long long k = 0;
    while (ok && k < steps) {
        prop.linear(u, ut, cfg.dt);
        ++k;
        const bool sample = !at[static_cast<std::size_t>(k)].empty();
        if (k == steps || sample) {
            ok = kick(half);
            if (!ok) break;
            emit(k);
            if (k < steps) ok = kick(half);
        } else {
            ok = kick(cfg.dt);
        }
    }
    result.steps = k;
    result.status = ok ? EvolveStatus::ok : EvolveStatus::blowup;
    result.final_state = WaveState(inverse_transform(u), inverse_transform(ut), t0 + static_cast<double>(k) * cfg.dt);
    return result;
}

Trajectory evolve(const WaveState& initial, double T, const SolverConfig& cfg, const std::vector<double>& sample_times)
{
    Trajectory traj;
    traj.states.resize(sample_times.size());
    const auto r = evolve(initial, T, cfg, sample_times,
                          [&](const WaveState& s, std::size_t i) { traj.states[i] = s; });
    traj.status = r.status;
    return traj;
}

WaveState reverse_velocity(const WaveState& state)
{
    return {state.u, -1.0 * state.ut, state.time};
}

GridField energy_density(const WaveState& state)
{
    const SpectrumField u = forward_transform(state.u);
    GridField e(state.grid());
    e.samples = state.ut.samples.square();
    for (int a = 0; a < state.grid().dim(); ++a) e.samples += inverse_transform(partial_derivative(u, a)).samples.square();
    e.samples *= 0.5;
    return e;
}

double linear_energy(const WaveState& state)
{
    const auto geo = spectral_geometry(state.grid());
    const SpectrumField u = forward_transform(state.u);
    const SpectrumField ut = forward_transform(state.ut);
    return 0.5 * (sobolev_norm(ut, 0.0) * sobolev_norm(ut, 0.0) + weighted_energy(u, geo->k2));
}

double hamiltonian(const WaveState& state, double p)
{
    const double lp = lebesgue_norm(state.u, p + 1.0);
    return linear_energy(state) + std::pow(lp, p + 1.0) / (p + 1.0);
}

bool inside_boxes(const Eigen::Vector3d& x, const std::vector<Box>& boxes, double enlargement, const TorusGrid& grid)
{
    for (const Box& b : boxes) {
        bool in = true;
        for (int a = 0; a < grid.dim() && in; ++a)
            in = std::abs(periodic_offset(x[a], b.center[a], grid.period())) <= b.half_width[a] + enlargement;
        if (in) return true;
    }
    return false;
}

double light_cone_leakage(const WaveState& state, const std::vector<Box>& support0, double t,
                          std::optional<double> enlargement)
{
    const TorusGrid& g = state.grid();
    const double grow = enlargement ? *enlargement : t + 3.0 * g.spacing();
    const GridField e = energy_density(state);
    double total = 0.0, outside = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double v = e.samples[static_cast<Eigen::Index>(i)];
        total += v;
        if (!inside_boxes(g.point(i), support0, grow, g)) outside += v;
    }
    return total > 0.0 ? outside / total : 0.0;
}

Diagnostics diagnostics(const WaveState& state, double s, double p, const std::vector<Box>& support0)
{
    const SpectrumField u = forward_transform(state.u);
    Diagnostics d;
    d.time = state.time;
    d.l2 = sobolev_norm(u, 0.0);
    d.hs = sobolev_norm(u, s);
    d.h1 = sobolev_norm(u, 1.0);
    d.linf = sup_norm(state.u);
    d.hamiltonian = hamiltonian(state, p);
    d.leakage = support0.empty() ? 0.0 : light_cone_leakage(state, support0, state.time);
    return d;
}

void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<Diagnostics>& rows)
{
    std::ofstream out(path);
    out << "time,l2,hs,h1,linf,hamiltonian,leakage\n" << std::setprecision(17);
    for (const auto& r : rows)
        out << r.time << ',' << r.l2 << ',' << r.hs << ',' << r.h1 << ',' << r.linf << ',' << r.hamiltonian << ','
            << r.leakage << '\n';
}

}  // namespace wavelab
