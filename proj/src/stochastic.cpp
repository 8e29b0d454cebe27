#include <wavelab/stochastic.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

namespace wavelab {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Eigen::Index half_index(const TorusGrid& g, const std::array<int, 3>& m)
{
    const int n = g.points_per_axis(), h = g.half_points(), d = g.dim();
    auto wrap = [n](int f) { return f >= 0 ? f : n + f; };
    if (d == 1) return m[0];
    if (d == 2) return static_cast<Eigen::Index>(wrap(m[0])) * h + m[1];
    return (static_cast<Eigen::Index>(wrap(m[0])) * n + wrap(m[1])) * h + m[2];
}

void check_modes(const RandomizationSpec& spec, const TorusGrid& g)
{
    for (const auto& mode : spec.modes)
        for (int a = 0; a < 3; ++a) {
            if (a >= g.dim() && mode.m[a] != 0) throw DomainError("randomization: mode has components beyond grid dimension");
            if (a < g.dim() && 2 * std::abs(mode.m[a]) >= g.points_per_axis())
                throw DomainError("randomization: mode frequency at or beyond Nyquist");
        }
}

// Adds A cos(k.x) + B sin(k.x) to the half spectrum.
void add_mode(SpectrumField& f, const std::array<int, 3>& m, double A, double B, double scale)
{
    const int d = f.grid.dim();
    std::array<int, 3> neg{-m[0], -m[1], -m[2]};
    const std::complex<double> plus(0.5 * A * scale, -0.5 * B * scale);
    if (m == std::array<int, 3>{0, 0, 0}) {
        f.coefficients[0] += A * scale;
        return;
    }
    const int last = m[static_cast<std::size_t>(d - 1)];
    if (last > 0) {
        f.coefficients[half_index(f.grid, m)] += plus;
    } else if (last < 0) {
        f.coefficients[half_index(f.grid, neg)] += std::conj(plus);
    } else {
        f.coefficients[half_index(f.grid, m)] += plus;
        f.coefficients[half_index(f.grid, neg)] += std::conj(plus);
    }
}

GridField build_field(const RandomizationSpec& spec, const TorusGrid& g, std::mt19937_64* gen)
{
    check_modes(spec, g);
    const double scale = std::pow(g.period(), 0.5 * g.dim());
    SpectrumField f(g);
    std::normal_distribution<double> normal;
    const double alpha0 = gen ? normal(*gen) : 1.0;
    f.coefficients[0] += spec.a0 * alpha0 * scale;
    for (const auto& mode : spec.modes) {
        const double alpha = gen ? normal(*gen) : 1.0;
        const double beta = gen ? normal(*gen) : 1.0;
        add_mode(f, mode.m, mode.a * alpha, mode.b * beta, scale);
    }
    return inverse_transform(f);
}

}  // namespace

std::mt19937_64 derived_generator(std::uint64_t seed, std::uint64_t index)
{
    std::seed_seq seq{splitmix64(seed), splitmix64(seed ^ splitmix64(index + 1))};
    return std::mt19937_64(seq);
}

GridField sample_randomized_field(const RandomizationSpec& spec, const TorusGrid& grid, std::uint64_t index)
{
    auto gen = derived_generator(spec.seed, index);
    return build_field(spec, grid, &gen);
}

GridField trig_field(const RandomizationSpec& spec, const TorusGrid& grid) { return build_field(spec, grid, nullptr); }

MomentEstimate mc_lq_moment(const RandomizationSpec& spec, const TorusGrid& grid, int q, long long samples, int threads)
{
    if (q < 2 || q % 2 != 0) throw DomainError("mc_lq_moment: q must be an even integer >= 2");
    if (samples < 100) throw DomainError("mc_lq_moment: need at least 100 samples");
    check_modes(spec, grid);
    std::vector<double> values(static_cast<std::size_t>(samples));
    const int workers = std::max(1, threads);
    auto work = [&](int w) {
        for (long long i = w; i < samples; i += workers) {
            const GridField f = sample_randomized_field(spec, grid, static_cast<std::uint64_t>(i));
            values[static_cast<std::size_t>(i)] = std::pow(lebesgue_norm(f, q), q);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    MomentEstimate est;
    est.q = q;
    est.sample_count = samples;
    double sum = 0.0;
    for (double v : values) sum += v;
    est.mean = sum / static_cast<double>(samples);
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    const double var = ss / static_cast<double>(samples - 1);
    est.std_error = std::sqrt(var / static_cast<double>(samples));
    return est;
}

double wick_oracle_moment(const RandomizationSpec& spec, const TorusGrid& grid, int q)
{
    double cq;
    if (q == 4) cq = 3.0;
    else if (q == 6) cq = 15.0;
    else throw DomainError("wick_oracle_moment: q must be 4 or 6");
    check_modes(spec, grid);
    const double unit = grid.wavenumber_unit();
    const GridField sigma_q = sample(grid, [&](const Eigen::Vector3d& x) {
        double s2 = spec.a0 * spec.a0;
        for (const auto& mode : spec.modes) {
            double phase = 0.0;
            for (int a = 0; a < grid.dim(); ++a) phase += unit * mode.m[static_cast<std::size_t>(a)] * x[a];
            const double c = std::cos(phase), s = std::sin(phase);
            s2 += mode.a * mode.a * c * c + mode.b * mode.b * s * s;
        }
        return std::pow(s2, 0.5 * q);
    });
    return cq * grid.cell_volume() * sigma_q.samples.sum();
}

nlohmann::json to_json(const MomentEstimate& est, double oracle)
{
    nlohmann::json j;
    j["q"] = est.q;
    j["samples"] = est.sample_count;
    j["mean"] = est.mean;
    j["std_error"] = est.std_error;
    j["oracle"] = oracle;
    j["z_score"] = est.std_error > 0.0 ? (est.mean - oracle) / est.std_error : 0.0;
    return j;
}

bool gm_membership(const SpectrumField& f, long long M, double q)
{
    if (M < 16) throw DomainError("gm_membership: M must be >= 16");
    return lebesgue_norm(inverse_transform(low_pass(f, M)), q) > std::log(std::log(static_cast<double>(M)));
}

double coefficient_mass(const RandomizationSpec& spec)
{
    double m = spec.a0 * spec.a0;
    for (const auto& mode : spec.modes) m += 0.5 * (mode.a * mode.a + mode.b * mode.b);
    return m;
}

RandomizationSpec random_spec(int dim, int modes, int max_freq, std::uint64_t seed, bool unit_mass)
{
    std::mt19937_64 gen = derived_generator(seed, 0xC0FFEEULL);
    std::uniform_int_distribution<int> freq(-max_freq, max_freq);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    RandomizationSpec spec;
    spec.seed = seed;
    spec.a0 = coef(gen);
    std::set<std::array<int, 3>> used;
    int guard = 0;
    while (static_cast<int>(spec.modes.size()) < modes && guard++ < 100000) {
        TrigMode t;
        for (int a = 0; a < dim; ++a) t.m[static_cast<std::size_t>(a)] = freq(gen);
        std::array<int, 3> neg{-t.m[0], -t.m[1], -t.m[2]};
        if (t.m == std::array<int, 3>{0, 0, 0} || used.count(t.m) || used.count(neg)) continue;
        used.insert(t.m);
        t.a = coef(gen);
        t.b = coef(gen);
        spec.modes.push_back(t);
    }
    if (unit_mass) {
        const double s = 1.0 / std::sqrt(coefficient_mass(spec));
        spec.a0 *= s;
        for (auto& t : spec.modes) {
            t.a *= s;
            t.b *= s;
        }
    }
    return spec;
}

}  // namespace wavelab
