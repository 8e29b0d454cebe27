#include <wavelab/ode_profile.hpp>
#include <wavelab/quadrature.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>

#include <json.hpp>

namespace wavelab {

namespace {

void check_exponent(double p)
{
    if (!(p >= 3.0 && p < 5.0)) throw DomainError("nonlinearity exponent p must lie in [3, 5)");
}

double force(double p, double v) { return std::pow(std::abs(v), p - 1.0) * v; }

double force_slope(double p, double v) { return p * std::pow(std::abs(v), p - 1.0); }

// Leapfrog weights of the order-8 triple-jump composition.
const std::vector<double>& composition_weights()
{
    static const std::vector<double> weights = [] {
        std::vector<double> w{1.0};
        for (int order = 2; order < 8; order += 2) {
            const double r = std::pow(2.0, 1.0 / (order + 1));
            const double g1 = 1.0 / (2.0 - r);
            const double g2 = 1.0 - 2.0 * g1;
            std::vector<double> next;
            for (double g : {g1, g2, g1})
                for (double x : w) next.push_back(g * x);
            w = std::move(next);
        }
        return w;
    }();
    return weights;
}

void symplectic_step(double p, double& v, double& vd, double h)
{
    for (double w : composition_weights()) {
        const double hw = h * w;
        vd -= 0.5 * hw * force(p, v);
        v += hw * vd;
        vd -= 0.5 * hw * force(p, v);
    }
}

}  // namespace

double profile_energy(double p, double V, double Vdot)
{
    return 0.5 * Vdot * Vdot + std::pow(std::abs(V), p + 1.0) / (p + 1.0);
}

double compute_period(double p)
{
    check_exponent(p);
    // V = 1 - w^2 turns the turning-point singularity into a smooth integrand.
    auto integrand = [p](double w) {
        if (w <= 0.0) return 2.0 / std::sqrt(p + 1.0);
        const double rest = 1.0 - std::pow(1.0 - w * w, p + 1.0);
        return 2.0 * w / std::sqrt(rest);
    };
    double prev = integrate(integrand, 0.0, 1.0, 8, 32);
    for (int panels = 16; panels <= 1024; panels *= 2) {
        const double next = integrate(integrand, 0.0, 1.0, panels, 32);
        const bool done = std::abs(next - prev) <= 1e-14 * std::abs(next);
        prev = next;
        if (done) break;
    }
    return 4.0 * std::sqrt((p + 1.0) / 2.0) * prev;
}

std::pair<double, double> integrate_oscillator(double p, double V0, double Vdot0, double t,
                                               double max_step)
{
    check_exponent(p);
    if (!(max_step > 0.0)) throw DomainError("integrate_oscillator: step must be positive");
    const auto steps = static_cast<long long>(std::ceil(std::abs(t) / max_step));
    double v = V0, vd = Vdot0;
    if (steps == 0) return {v, vd};
    const double h = t / static_cast<double>(steps);
    for (long long i = 0; i < steps; ++i) symplectic_step(p, v, vd, h);
    return {v, vd};
}

namespace {

// Time of the second sign change of Vdot (the end of the first period).
double detect_period(double p, double h)
{
    double v = 1.0, vd = 0.0, t = 0.0;
    bool passed_half = false;
    for (long long i = 0; i < 100000000; ++i) {
        double nv = v, nvd = vd;
        symplectic_step(p, nv, nvd, h);
        if (!passed_half && vd < 0.0 && nvd >= 0.0) passed_half = true;
        if (passed_half && vd > 0.0 && nvd <= 0.0) {
            double lo = 0.0, hi = h;
            for (int it = 0; it < 200 && hi - lo > 1e-16 * (t + h); ++it) {
                const double mid = 0.5 * (lo + hi);
                double mv = v, mvd = vd;
                symplectic_step(p, mv, mvd, mid);
                (mvd > 0.0 ? lo : hi) = mid;
            }
            return t + 0.5 * (lo + hi);
        }
        v = nv;
        vd = nvd;
        t += h;
    }
    throw AccuracyError("integrate_profile: no period detected", 0.0);
}

}  // namespace

OdeProfile integrate_profile(double p, double tol)
{
    check_exponent(p);
    if (!(tol > 0.0 && tol <= 1e-6)) throw DomainError("integrate_profile: tol must lie in (0, 1e-6]");
    const double e0 = 1.0 / (p + 1.0);
    const double t_quad = compute_period(p);
    double h0 = 1.0 / 512.0;
    for (int attempt = 0; attempt < 6; ++attempt, h0 *= 0.5) {
        OdeProfile prof;
        prof.p = p;
        prof.period_quadrature = t_quad;
        const double period = detect_period(p, h0);
        prof.period_integrated = period;
        prof.period = period;
        auto m = static_cast<Eigen::Index>(std::ceil(period / h0));
        m += (4 - m % 4) % 4;
        const double h = period / static_cast<double>(m);
        prof.step = h;
        prof.sample_times.resize(m + 1);
        prof.V.resize(m + 1);
        prof.Vdot.resize(m + 1);
        double v = 1.0, vd = 0.0, drift = 0.0;
        for (Eigen::Index i = 0; i <= m; ++i) {
            prof.sample_times[i] = static_cast<double>(i) * h;
            prof.V[i] = v;
            prof.Vdot[i] = vd;
            drift = std::max(drift, std::abs(profile_energy(p, v, vd) - e0) / e0);
            if (i < m) symplectic_step(p, v, vd, h);
        }
        prof.energy_drift = drift;
        if (drift > tol) continue;
        if (std::abs(period - t_quad) > 1e-5 * t_quad)
            throw AccuracyError("integrate_profile: integrated period disagrees with quadrature",
                                std::abs(period - t_quad) / t_quad);
        // Close the table exactly so periodic reduction is seamless.
        prof.V[m] = 1.0;
        prof.Vdot[m] = 0.0;
        return prof;
    }
    throw AccuracyError("integrate_profile: energy drift above tolerance", tol);
}

const OdeProfile& cached_profile(double p)
{
    static std::mutex mutex;
    static std::map<double, std::unique_ptr<OdeProfile>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(p);
    if (it == cache.end())
        it = cache.emplace(p, std::make_unique<OdeProfile>(integrate_profile(p, 1e-10))).first;
    return *it->second;
}

std::pair<double, double> evaluate_profile(const OdeProfile& prof, double t)
{
    const double T = prof.period;
    double tau = std::fmod(t, T);
    if (tau < 0.0) tau += T;
    const Eigen::Index m = prof.V.size() - 1;
    const double h = prof.step;
    auto i = static_cast<Eigen::Index>(tau / h);
    if (i >= m) i = m - 1;
    const double u = (tau - static_cast<double>(i) * h) / h;
    if (u == 0.0) return {prof.V[i], prof.Vdot[i]};

    const double p = prof.p;
    const double v0 = prof.V[i], v1 = prof.V[i + 1];
    const double d0 = prof.Vdot[i], d1 = prof.Vdot[i + 1];
    const double a0 = -force(p, v0), a1 = -force(p, v1);
    const double j0 = -force_slope(p, v0) * d0, j1 = -force_slope(p, v1) * d1;

    const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
    const double h0 = 1 - 10 * u3 + 15 * u4 - 6 * u5;
    const double h1 = u - 6 * u3 + 8 * u4 - 3 * u5;
    const double h2 = 0.5 * u2 - 1.5 * u3 + 1.5 * u4 - 0.5 * u5;
    const double h3 = 10 * u3 - 15 * u4 + 6 * u5;
    const double h4 = -4 * u3 + 7 * u4 - 3 * u5;
    const double h5 = 0.5 * u3 - u4 + 0.5 * u5;
    auto hermite = [&](double f0, double g0, double c0, double f1, double g1, double c1) {
        return h0 * f0 + h * h1 * g0 + h * h * h2 * c0 + h3 * f1 + h * h4 * g1 + h * h * h5 * c1;
    };
    return {hermite(v0, d0, a0, v1, d1, a1), hermite(d0, a0, j0, d1, a1, j1)};
}

WaveState exact_ode_solution(const RescaledOdeSolution& spec, double t)
{
    if (spec.profile == nullptr) throw ConfigurationError("exact_ode_solution: missing profile");
    const OdeProfile& prof = *spec.profile;
    const TorusGrid& g = spec.amplitude.grid;
    WaveState out(g);
    out.time = t;
    const double half = 0.5 * (prof.p - 1.0);
    const auto& a = spec.amplitude.samples;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double A = a[i];
        if (A < 0.0) throw DomainError("exact_ode_solution: negative amplitude");
        if (A == 0.0) continue;
        const double w = std::pow(A, half);
        const auto [V, Vd] = evaluate_profile(prof, t * w);
        out.u.samples[i] = A * V;
        out.ut.samples[i] = A * w * Vd;
    }
    return out;
}

void write_profile(const std::filesystem::path& stem, const OdeProfile& prof)
{
    {
        std::ofstream csv(stem.string() + ".csv");
        csv << "t,V,Vdot\n" << std::setprecision(17);
        for (Eigen::Index i = 0; i < prof.V.size(); ++i)
            csv << prof.sample_times[i] << ',' << prof.V[i] << ',' << prof.Vdot[i] << '\n';
    }
    nlohmann::json j;
    j["p"] = prof.p;
    j["period"] = prof.period;
    j["energy_drift"] = prof.energy_drift;
    std::ofstream(stem.string() + ".json") << j.dump(2) << "\n";
}

}  // namespace wavelab
