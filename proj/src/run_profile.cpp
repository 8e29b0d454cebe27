#include <wavelab/experiments.hpp>
#include <wavelab/ode_profile.hpp>

#include "experiment_util.hpp"

#include <cmath>
#include <sstream>

namespace wavelab {

using nlohmann::json;

namespace {

std::string p_label(double p)
{
    std::ostringstream s;
    s << p;
    return s.str();
}

}  // namespace

Report run_profile(const json& cfg, const RunOptions& opts)
{
    Report report("profile", cfg);
    const json& c = cfg.at("profile");
    const auto ps = detail::number_list(c.at("p"), "profile.p");
    const double tol = c.at("tol").get<double>();
    const int periods = c.at("periods").get<int>();
    if (periods < 1) throw ConfigurationError("profile.periods must be >= 1");

    struct Row {
        OdeProfile prof;
        double long_drift = 0.0;
        double return_error = 0.0;
    };
    std::vector<Row> rows(ps.size());
    parallel_for(ps.size(), cfg.at("threads").get<int>(), [&](std::size_t i) {
        Row& r = rows[i];
        r.prof = integrate_profile(ps[i], tol);
        const double e0 = 1.0 / (ps[i] + 1.0);
        double V = 1.0, Vd = 0.0;
        for (int k = 0; k < periods; ++k) {
            std::tie(V, Vd) = integrate_oscillator(ps[i], V, Vd, r.prof.period, r.prof.step);
            r.long_drift = std::max(r.long_drift, std::abs(profile_energy(ps[i], V, Vd) - e0) / e0);
        }
        r.return_error = std::hypot(V - 1.0, Vd);
    });

    CsvTable table({"p", "period", "period_integrated", "period_quadrature", "energy_drift",
                    "energy_drift_long", "return_error"});
    json per_p = json::array();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto& r = rows[i];
        table.add_row({ps[i], r.prof.period, r.prof.period_integrated, r.prof.period_quadrature,
                       r.prof.energy_drift, r.long_drift, r.return_error});
        per_p.push_back({{"p", ps[i]}, {"period", r.prof.period},
                         {"period_integrated", r.prof.period_integrated},
                         {"period_quadrature", r.prof.period_quadrature},
                         {"energy_drift", r.prof.energy_drift},
                         {"energy_drift_long", r.long_drift},
                         {"return_error", r.return_error}});
        if (!opts.out_dir.empty()) write_profile(opts.out_dir / ("profile_p" + p_label(ps[i])), r.prof);

        const std::string tag = "p=" + p_label(ps[i]);
        std::ostringstream d;
        d << "drift over " << periods << " periods " << r.long_drift;
        report.check("energy_conserved[" + tag + "]",
                     r.prof.energy_drift <= 1e-8 && r.long_drift <= 1e-8, d.str());
        std::ostringstream e;
        const double rel = std::abs(r.prof.period_integrated - r.prof.period_quadrature) / r.prof.period_quadrature;
        e << "integrated " << r.prof.period_integrated << " vs quadrature " << r.prof.period_quadrature;
        report.check("period_agreement[" + tag + "]", rel <= 1e-5, e.str());
    }
    report.results()["profiles"] = per_p;
    report.add_table("profile_summary", table, opts.out_dir);
    return report;
}

}  // namespace wavelab
