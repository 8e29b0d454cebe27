#include <wavelab/experiments.hpp>
#include <wavelab/fit.hpp>
#include <wavelab/ode_profile.hpp>

#include "experiment_util.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace wavelab {

using nlohmann::json;

namespace {

std::string fmt(double x)
{
    std::ostringstream s;
    s << x;
    return s.str();
}

}  // namespace

Report run_lemma_bt(const json& cfg, const RunOptions& opts)
{
    Report report("lemma-bt", cfg);
    const json& c = cfg.at("lemma");
    const int dim = cfg.at("grid").at("dim").get<int>();
    const int N = cfg.at("grid").at("N").get<int>();
    if (dim != 1 && dim != 2) throw ConfigurationError("lemma-bt: dim must be 1 or 2");
    const TorusGrid grid(dim, N);
    const double p = c.at("p").get<double>();
    const auto ss = detail::number_list(c.at("s"), "lemma.s");
    const auto lambdas = detail::number_list(c.at("lambda"), "lemma.lambda");
    const std::string profile_kind = c.at("profile").get<std::string>();
    const int harmonics = c.at("harmonics").get<int>();
    if (profile_kind != "oscillator" && profile_kind != "constant")
        throw ConfigurationError("lemma.profile must be oscillator or constant");
    for (double lam : lambdas) {
        const double l2 = std::log2(lam);
        if (lam < 4.0 || lam > 256.0 || l2 != std::floor(l2))
            throw ConfigurationError("lemma.lambda entries must be powers of two in [4, 256]");
    }
    for (double s : ss)
        if (s < 0.0) throw ConfigurationError("lemma.s entries must be >= 0");

    const BumpSpec psi_spec = detail::parse_bump(c.at("psi"), dim);
    require_resolved(psi_spec.support_radius, grid, "psi");
    const GridField psi = make_bump(psi_spec, grid);

    const json& pc = c.at("phi");
    const std::string phi_kind = pc.at("kind").get<std::string>();
    const double slope = pc.at("slope").get<double>();
    const double phi_radius = pc.at("radius").get<double>();
    if (phi_radius <= psi_spec.support_radius || phi_radius >= 0.5 * grid.period())
        throw ConfigurationError("lemma.phi.radius must lie between the psi radius and L/2");

    // phi and the largest |grad phi| on supp psi
    double grad_max = 0.0;
    GridField phi(grid);
    if (phi_kind == "linear") {
        phi = sample(grid, [&](const Eigen::Vector3d& x) {
            const double y = periodic_offset(x[0], psi_spec.center[0], grid.period());
            return slope * y * smooth_plateau(y, psi_spec.support_radius, phi_radius);
        });
        grad_max = std::abs(slope);
    } else if (phi_kind == "bump") {
        BumpSpec b = psi_spec;
        b.shape = BumpShape::exponential_bump;
        b.support_radius = phi_radius;
        phi = sample(grid, [&](const Eigen::Vector3d& x) { return slope * bump_value(b, x, grid.period()); });
        for (int i = 0; i <= 1000; ++i) {
            const double r = psi_spec.support_radius * i / 1000.0 / phi_radius;
            grad_max = std::max(grad_max, std::abs(slope * bump_profile_derivative(b.shape, b.exponent, r)) / phi_radius);
        }
    } else {
        throw ConfigurationError("lemma.phi.kind must be linear or bump");
    }
    if (!((psi.samples * phi.samples).abs().maxCoeff() > 0.0))
        throw ConfigurationError("lemma-bt: psi * phi vanishes identically");

    const OdeProfile& prof = cached_profile(p);
    const double nyquist = std::numbers::pi * N / grid.period();
    for (double lam : lambdas) {
        const double k_local = profile_kind == "constant" ? 0.0
                                                          : lam * grad_max * (two_pi / prof.period) * harmonics;
        if (k_local > nyquist)
            throw ResolutionError("lemma-bt: lambda=" + fmt(lam) + " needs wavenumber " + fmt(k_local) +
                                  " above the grid Nyquist " + fmt(nyquist));
    }

    // norms[l][i] = |psi V(lambda_l phi)|_{H^{s_i}}
    std::vector<std::vector<double>> norms(lambdas.size(), std::vector<double>(ss.size()));
    parallel_for(lambdas.size(), cfg.at("threads").get<int>(), [&](std::size_t l) {
        GridField f(grid);
        for (Eigen::Index i = 0; i < f.samples.size(); ++i) {
            const double V = profile_kind == "constant" ? 1.0 : evaluate_profile(prof, lambdas[l] * phi.samples[i]).first;
            f.samples[i] = psi.samples[i] * V;
        }
        const SpectrumField fh = forward_transform(f);
        for (std::size_t i = 0; i < ss.size(); ++i) norms[l][i] = sobolev_norm(fh, ss[i]);
    });

    std::vector<std::string> cols{"lambda"};
    for (double s : ss) cols.push_back("hs_s" + fmt(s));
    CsvTable table(cols);
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
        std::vector<double> row{lambdas[l]};
        row.insert(row.end(), norms[l].begin(), norms[l].end());
        table.add_row(row);
    }
    report.add_table("lemma_bt", table, opts.out_dir);

    json fits = json::array();
    for (std::size_t i = 0; i < ss.size(); ++i) {
        const double s = ss[i];
        std::vector<double> y;
        for (const auto& row : norms) y.push_back(row[i]);
        const std::string tag = "s=" + fmt(s);
        if (lambdas.size() < 4) {
            fits.push_back({{"s", s}, {"fit", nullptr}});
            report.check("fit_available[" + tag + "]", false, "fewer than 4 lambda values");
            continue;
        }
        const FitResult fit = fit_power_law(lambdas, y);
        const double predicted = profile_kind == "constant" ? 0.0 : s;
        fits.push_back({{"s", s}, {"predicted_slope", predicted}, {"fit", to_json(fit)}});
        const std::string detail = "slope " + fmt(fit.exponent) + " vs predicted " + fmt(predicted);
        if (predicted > 0.0) {
            report.check("slope_lower_bound[" + tag + "]", fit.exponent >= 0.9 * s, detail);
            report.check("slope_within_10pct[" + tag + "]", std::abs(fit.exponent - s) <= 0.1 * s, detail);
        } else {
            report.check("slope_flat[" + tag + "]", std::abs(fit.exponent) <= 0.05, detail);
        }
    }
    report.results()["fits"] = fits;
    report.results()["profile_period"] = prof.period;
    report.results()["grad_phi_max"] = grad_max;
    return report;
}

}  // namespace wavelab
