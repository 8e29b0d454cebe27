#include <wavelab/energy_metrics.hpp>
#include <wavelab/experiments.hpp>
#include <wavelab/fit.hpp>
#include <wavelab/wave_solver.hpp>

#include "experiment_util.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
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

// Evolves `state` to time t in steps no longer than dt_max.
EvolveResult advance(const WaveState& state, double t, SolverConfig cfg, double dt_max)
{
    const double span = t - state.time;
    if (span <= 0.0) return {state, EvolveStatus::ok, 0};
    const double steps = std::max(1.0, std::ceil(span / dt_max - 1e-9));
    cfg.dt = span / steps;
    EvolveResult r = evolve(state, span, cfg, {}, nullptr);
    r.final_state.time = t;
    return r;
}

}  // namespace

Report run_instant(const json& cfg, const RunOptions& opts)
{
    Report report("instant", cfg);
    const json& c = cfg.at("instant");
    DataFamilyParams prm = detail::parse_family(cfg.at("params"));
    const int dim = cfg.at("grid").at("dim").get<int>();
    const TorusGrid grid(dim, cfg.at("grid").at("N").get<int>());
    const BumpSpec bump = detail::parse_bump(cfg.at("bump"), dim);
    const std::string mode = c.at("mode").get<std::string>();
    const int k0 = c.at("k0").get<int>();
    const json& sc = cfg.at("solver");

    std::vector<InstantPacket> schedule;
    if (mode == "budget") {
        const int count = c.at("count").get<int>();
        if (count < 1 || count > 6) throw ConfigurationError("instant.count must lie in [1, 6]");
        for (double log_n : budget_schedule(prm, bump, k0, count)) {
            InstantPacket pk;
            pk.log_n = log_n;
            const double k = k0 + static_cast<double>(schedule.size());
            pk.center[0] = 1.0 / (k * k);
            schedule.push_back(pk);
        }
    } else if (mode == "explicit") {
        const json& packets = c.at("packets");
        if (packets.empty() || packets.size() > 6) throw ConfigurationError("instant.packets must hold 1 to 6 entries");
        for (const auto& p : packets) {
            InstantPacket pk;
            const double n = p.at("n").get<double>();
            if (n < 3 || n != std::floor(n)) throw ConfigurationError("instant.packets: n must be an integer >= 3");
            pk.log_n = std::log(n);
            pk.center = detail::parse_point(p.at("center"));
            schedule.push_back(pk);
        }
    } else {
        throw ConfigurationError("instant.mode must be budget or explicit");
    }

    const PsiNormTable norms(prm, bump);
    CsvTable plan({"k", "log_n", "t_n", "hs_norm", "budget", "points_across", "paper_box_radius"});
    json packets = json::array();
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        const int k = k0 + static_cast<int>(i);
        const ExponentLedger led = exponent_ledger_log(prm, schedule[i].log_n);
        const double hs = norms.hs_norm(schedule[i].log_n);
        const double budget = std::ldexp(1.0, -k);
        const double radius = bump.support_radius * std::exp(-schedule[i].log_n);
        // C/(2n) - C t_n with C the support diameter of the bump
        const double C = 2.0 * bump.support_radius;
        const double paper_box = C * (0.5 * std::exp(-schedule[i].log_n) - led.t_n);
        plan.add_row({static_cast<double>(k), schedule[i].log_n, led.t_n, hs, budget, 2.0 * radius / grid.spacing(),
                      paper_box});
        packets.push_back({{"k", k}, {"log_n", schedule[i].log_n}, {"t_n", led.t_n}, {"hs_norm", hs},
                           {"budget", budget}, {"center", {schedule[i].center[0], schedule[i].center[1],
                                                           schedule[i].center[2]}}});
        report.check("budget[k=" + std::to_string(k) + "]", hs <= budget, "|psi|_Hs " + fmt(hs) + " vs " + fmt(budget));
    }
    report.results()["packets"] = packets;
    report.add_table("instant_schedule", plan, opts.out_dir);

    InstantaneousData data;
    try {
        data = make_instantaneous_data(WaveState(grid), schedule, prm, bump);
    } catch (const Error& e) {
        report.check("construction", false, e.what());
        return report;
    }
    report.check("construction", true);

    SolverConfig solver;
    solver.p = prm.p;
    solver.padding_factor = sc.at("padding").get<int>();
    solver.blowup_factor = sc.at("blowup_factor").get<double>();
    double amp = 0.0;
    for (const auto& led : data.ledgers) amp = std::max(amp, led.kappa_n * std::exp(led.q1 * led.log_n));
    const double dt_max = default_time_step(prm.p, amp) * sc.at("dt_factor").get<double>();

    const std::size_t count = schedule.size();
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return data.ledgers[a].t_n < data.ledgers[b].t_n;
    });

    std::vector<double> composite(count), single(count), leakage(count);
    bool blowup = false;
    WaveState state = data.state;
    for (std::size_t idx : order) {
        const EvolveResult r = advance(state, data.ledgers[idx].t_n, solver, dt_max);
        blowup = blowup || r.status != EvolveStatus::ok;
        state = r.final_state;
        composite[idx] = localized_hs_norm(state.u, prm.s, data.boxes[idx]);
        if (r.status != EvolveStatus::ok) break;
    }

    parallel_for(count, cfg.at("threads").get<int>(), [&](std::size_t i) {
        const InstantaneousData one = make_instantaneous_data(WaveState(grid), {schedule[i]}, prm, bump);
        const EvolveResult r = advance(one.state, one.ledgers[0].t_n, solver, dt_max);
        single[i] = localized_hs_norm(r.final_state.u, prm.s, data.boxes[i]);
        leakage[i] = light_cone_leakage(r.final_state, {data.boxes[i]}, 0.0, 3.0 * grid.spacing());
        if (r.status != EvolveStatus::ok) blowup = true;
    });

    CsvTable table({"k", "t_n", "localized_hs", "single_packet_hs", "cross_talk", "leakage"});
    std::vector<double> localized;
    double worst_talk = 0.0, worst_leak = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double talk = std::abs(composite[i] - single[i]) / single[i];
        worst_talk = std::max(worst_talk, talk);
        worst_leak = std::max(worst_leak, leakage[i]);
        table.add_row({static_cast<double>(k0 + static_cast<int>(i)), data.ledgers[i].t_n, composite[i], single[i],
                       talk, leakage[i]});
        localized.push_back(composite[i]);
    }
    report.add_table("instant_evolution", table, opts.out_dir);
    report.check("no_blowup", !blowup);
    if (count > 1)
        report.check("localized_increasing", strictly_increasing(localized), "localized H^s along k");
    report.check("cross_talk", worst_talk <= 0.01, "worst " + fmt(worst_talk));
    report.check("leakage", worst_leak <= 1e-6, "worst " + fmt(worst_leak));
    return report;
}

}  // namespace wavelab
