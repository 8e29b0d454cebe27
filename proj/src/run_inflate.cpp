#include <wavelab/energy_metrics.hpp>
#include <wavelab/experiments.hpp>
#include <wavelab/fit.hpp>
#include <wavelab/ode_profile.hpp>
#include <wavelab/wave_solver.hpp>

#include "experiment_util.hpp"

#include <cmath>
#include <sstream>

namespace wavelab {

using nlohmann::json;

namespace {

struct SweepPoint {
    long long n = 0;
    ExponentLedger ledger;
    double dt = 0.0;
    long long steps = 0;
    EvolveStatus status = EvolveStatus::ok;
    double data_distance = 0.0;
    double u_hs0 = 0.0;
    double u_hs = 0.0;
    double v_hs = 0.0;
    double w_hs = 0.0;
    double e_n = 0.0;
    double control_ratio = 0.0;
    double hamiltonian_drift = 0.0;
    double max_leakage = 0.0;
    EnergyTrace trace;
    std::vector<Diagnostics> diag;
};

std::string fmt(double x)
{
    std::ostringstream s;
    s << x;
    return s.str();
}

}  // namespace

Report run_inflate(const json& cfg, const RunOptions& opts)
{
    Report report("inflate", cfg);
    const json& c = cfg.at("inflate");
    DataFamilyParams base_params = detail::parse_family(cfg.at("params"));
    const int dim = cfg.at("grid").at("dim").get<int>();
    const int N = cfg.at("grid").at("N").get<int>();
    const BumpSpec bump = detail::parse_bump(cfg.at("bump"), dim);
    const std::string domain = c.at("domain").get<std::string>();
    const int samples = c.at("samples").get<int>();
    const bool nonlinear = c.at("nonlinear").get<bool>();
    const bool negative_control = c.at("negative_control").get<bool>();
    const json& sc = cfg.at("solver");
    if (domain != "patch" && domain != "torus") throw ConfigurationError("inflate.domain must be patch or torus");
    if (samples < 2) throw ConfigurationError("inflate.samples must be >= 2");

    std::vector<long long> ns;
    for (double x : detail::number_list(c.at("n"), "inflate.n")) {
        if (x != std::floor(x) || x < 3) throw ConfigurationError("inflate.n entries must be integers >= 3");
        ns.push_back(static_cast<long long>(x));
    }

    const RandomizationSpec u0_spec = detail::parse_trig(c.at("u0"), dim, 0);
    const RandomizationSpec u1_spec = detail::parse_trig(c.at("u1"), dim, 0);
    const bool zero_base = u0_spec.a0 == 0.0 && u1_spec.a0 == 0.0 && u0_spec.modes.empty() && u1_spec.modes.empty();
    if (domain == "patch" && !zero_base)
        throw ConfigurationError("inflate: patch domain needs u0 = u1 = 0 (use domain torus)");

    const OdeProfile& profile = cached_profile(base_params.p);
    std::vector<SweepPoint> points(ns.size());

    // Preconditions for every n before anything runs.
    for (std::size_t i = 0; i < ns.size(); ++i) {
        DataFamilyParams prm = base_params;
        prm.n = ns[i];
        const ExponentLedger led = exponent_ledger(prm);
        const double period = domain == "patch" ? two_pi / static_cast<double>(ns[i]) : two_pi;
        const TorusGrid grid(dim, N, period);
        const double radius = bump.support_radius / static_cast<double>(ns[i]);
        require_resolved(radius, grid, "psi_n for n=" + std::to_string(ns[i]));
        if (radius + led.t_n >= 0.5 * period - bump.center.head(dim).cwiseAbs().maxCoeff())
            throw ConfigurationError("inflate: light cone of psi_n wraps around the domain for n=" +
                                     std::to_string(ns[i]));
    }

    parallel_for(ns.size(), cfg.at("threads").get<int>(), [&](std::size_t i) {
        SweepPoint& pt = points[i];
        DataFamilyParams prm = base_params;
        prm.n = ns[i];
        pt.n = ns[i];
        pt.ledger = exponent_ledger(prm);
        const double period = domain == "patch" ? two_pi / static_cast<double>(pt.n) : two_pi;
        const TorusGrid grid(dim, N, period);

        const GridField psi = make_psi_n(prm, bump, grid);
        WaveState base(grid);
        if (!zero_base) {
            base.u = trig_field(u0_spec, grid);
            base.ut = trig_field(u1_spec, grid);
        }
        const WaveState initial(base.u + psi, base.ut, 0.0);
        pt.data_distance = hs_distance(initial, base, prm.s);

        const double amplitude = pt.ledger.kappa_n * std::pow(static_cast<double>(pt.n), pt.ledger.q1);
        SolverConfig solver;
        solver.p = prm.p;
        solver.padding_factor = sc.at("padding").get<int>();
        solver.blowup_factor = sc.at("blowup_factor").get<double>();
        solver.nonlinear = nonlinear;
        const double dt0 = default_time_step(prm.p, amplitude) * sc.at("dt_factor").get<double>();
        const long long per = std::max<long long>(1, static_cast<long long>(
                                                         std::ceil(pt.ledger.t_n / (dt0 * (samples - 1)) - 1e-9)));
        pt.steps = per * (samples - 1);
        solver.dt = pt.ledger.t_n / static_cast<double>(pt.steps);
        pt.dt = solver.dt;

        std::vector<double> times;
        for (int k = 0; k < samples; ++k) times.push_back(static_cast<double>(per * k) * solver.dt);
        times.back() = pt.ledger.t_n;

        const RescaledOdeSolution ode{&profile, psi};
        const SemiclassicalWeights weights{static_cast<double>(pt.n), pt.ledger.q2};
        Box support;
        support.center = bump.center;
        for (int a = 0; a < dim; ++a) support.half_width[a] = bump.support_radius / static_cast<double>(pt.n);
        const double h0 = hamiltonian(initial, prm.p);

        const EvolveResult res = evolve(initial, pt.ledger.t_n, solver, times, [&](const WaveState& st, std::size_t) {
            const WaveState v = exact_ode_solution(ode, st.time);
            const WaveState w(st.u - v.u, st.ut - v.ut, st.time);
            pt.trace.push(st.time, semiclassical_energy(w, weights), sobolev_norm(forward_transform(w.u), prm.s));
            pt.diag.push_back(diagnostics(st, prm.s, prm.p, {support}));
            pt.hamiltonian_drift = std::max(pt.hamiltonian_drift,
                                            std::abs(pt.diag.back().hamiltonian - h0) / std::max(std::abs(h0), 1e-300));
            if (zero_base) pt.max_leakage = std::max(pt.max_leakage, pt.diag.back().leakage);
        });
        pt.status = res.status;
        const WaveState& last = res.final_state;
        pt.u_hs0 = sobolev_norm(forward_transform(initial.u), prm.s);
        pt.u_hs = sobolev_norm(forward_transform(last.u), prm.s);
        pt.v_hs = sobolev_norm(forward_transform(exact_ode_solution(ode, last.time).u), prm.s);
        pt.w_hs = pt.trace.hs_norms().empty() ? 0.0 : pt.trace.hs_norms().back();
        pt.e_n = pt.trace.final_sup();
        if (negative_control) {
            const WaveState lin = linear_flow(initial, pt.ledger.t_n);
            pt.control_ratio = sobolev_norm(forward_transform(lin.u), prm.s) / pt.u_hs0;
        }
        if (!opts.out_dir.empty()) {
            pt.trace.write_csv(opts.out_dir / ("energy_trace_n" + std::to_string(pt.n) + ".csv"));
            write_diagnostics_csv(opts.out_dir / ("diagnostics_n" + std::to_string(pt.n) + ".csv"), pt.diag);
        }
    });

    CsvTable table({"n", "log_n", "kappa_n", "t_n", "n_t_n", "dt", "steps", "data_distance", "u_hs_0",
                    "u_hs_tn", "v_hs_tn", "w_hs_tn", "e_n", "control_ratio", "hamiltonian_drift",
                    "leakage", "blowup"});
    std::vector<double> nv, en, uhs, vhs, dist;
    bool blowup = false;
    for (const auto& pt : points) {
        const double n = static_cast<double>(pt.n);
        table.add_row({n, pt.ledger.log_n, pt.ledger.kappa_n, pt.ledger.t_n, n * pt.ledger.t_n, pt.dt,
                       static_cast<double>(pt.steps), pt.data_distance, pt.u_hs0, pt.u_hs, pt.v_hs, pt.w_hs,
                       pt.e_n, pt.control_ratio, pt.hamiltonian_drift, pt.max_leakage,
                       pt.status == EvolveStatus::ok ? 0.0 : 1.0});
        blowup = blowup || pt.status != EvolveStatus::ok;
        nv.push_back(n);
        en.push_back(pt.e_n);
        uhs.push_back(pt.u_hs);
        vhs.push_back(pt.v_hs);
        dist.push_back(pt.data_distance);
    }
    report.add_table("inflate_sweep", table, opts.out_dir);

    const ExponentLedger first = points.front().ledger;
    const double sc_crit = critical_regularity(base_params.p);
    json& r = report.results();
    r["exponents"] = {{"q1", first.q1}, {"q2", first.q2}, {"g", first.g}, {"s_c", sc_crit}};
    r["predicted"] = {{"closeness_exponent", sc_crit - base_params.s},
                      {"data_distance_log_exponent", -base_params.delta1},
                      {"v_hs_log_exponent", base_params.s * base_params.delta2 - base_params.delta1}};

    json conclusions = json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const bool shrinking = i == 0 || dist[i] < dist[i - 1];
        const bool growing = i == 0 || uhs[i] > uhs[i - 1];
        conclusions.push_back({{"n", points[i].n}, {"data_distance", dist[i]}, {"u_hs_tn", uhs[i]},
                               {"data_distance_shrinking", shrinking}, {"solution_hs_growing", growing},
                               {"status", to_string(points[i].status)}});
    }
    r["conclusions"] = conclusions;

    report.check("no_blowup", !blowup, blowup ? "numerical blow-up flagged; partial data kept" : "");
    double eps_hat = 0.0;
    if (points.size() >= 4) {
        const FitResult fe = fit_power_law(nv, en);
        eps_hat = -fe.exponent;
        r["fits"]["e_n"] = to_json(fe);
        r["fits"]["e_n"]["eps_hat"] = eps_hat;
        std::vector<double> flat;
        for (std::size_t i = 0; i < nv.size(); ++i) flat.push_back(en[i] * std::pow(nv[i], eps_hat));
        r["fits"]["e_n"]["compensated"] = flat;
        r["fits"]["u_hs_tn"] = to_json(fit_log_power(nv, uhs));
        r["fits"]["v_hs_tn"] = to_json(fit_log_power(nv, vhs));
        r["fits"]["data_distance"] = to_json(fit_log_power(nv, dist));
    } else {
        r["fits"] = json::object();
        r["fits_note"] = "fewer than 4 sweep points; no fits emitted";
    }

    if (nonlinear) {
        report.check("closeness_decreasing", strictly_decreasing(en), "e_n(t_n) over the n sweep");
        if (points.size() >= 4) report.check("closeness_rate_positive", eps_hat > 0.0, "eps_hat = " + fmt(eps_hat));
        report.check("inflation_increasing", strictly_increasing(uhs), "|u_n(t_n)|_Hs over the n sweep");
        report.check("data_distance_decreasing", strictly_decreasing(dist), "|psi_n|_Hs over the n sweep");
    } else {
        bool flat = true;
        for (const auto& pt : points) flat = flat && pt.u_hs <= 2.0 * pt.u_hs0 && pt.u_hs >= 0.5 * pt.u_hs0;
        report.check("no_inflation_linear", flat, "|u(t_n)|_Hs within 2x of t=0 with the nonlinearity off");
    }
    if (negative_control) {
        bool ok = true;
        for (const auto& pt : points) ok = ok && pt.control_ratio < 2.0 && pt.control_ratio > 0.5;
        report.check("negative_control", ok, "linear flow keeps |u(t_n)|_Hs within 2x of t=0");
    }
    return report;
}

}  // namespace wavelab
