#include <wavelab/experiments.hpp>
#include <wavelab/stochastic.hpp>

#include "experiment_util.hpp"

#include <cmath>
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

Report run_gdelta(const json& cfg, const RunOptions& opts)
{
    Report report("gdelta", cfg);
    const json& c = cfg.at("gdelta");
    const double eps = c.at("eps").get<double>();
    const double q = c.at("q").get<double>();
    const int dim = c.at("dim").get<int>();
    const int M_max = c.at("M_max").get<int>();
    const int M_threshold = c.at("M_threshold").get<int>();
    if (M_max < 1 || M_max > 60) throw ConfigurationError("gdelta.M_max must lie in [1, 60]");
    if (M_threshold < 3) throw ConfigurationError("gdelta.M_threshold must be >= 3");
    const BumpSpec chi = detail::parse_bump(c.at("chi"), dim);

    CsvTable table({"M", "sum_eps_sq", "log_lq_norm", "loglog_M", "membership"});
    bool budget_ok = true;
    bool member_ok = true;
    int first_member = -1;
    for (int M = 1; M <= M_max; ++M) {
        const AnalyticLedger led = gdelta_ledger(M, eps, q, dim, chi);
        const double loglog = M >= 3 ? std::log(std::log(static_cast<double>(M))) : 0.0;
        const bool member = M >= 3 && led.log_lq_norm() > std::log(loglog);
        table.add_row({static_cast<double>(M), led.sum_eps_sq, led.log_lq_norm(), loglog, member ? 1.0 : 0.0});
        budget_ok = budget_ok && led.sum_eps_sq <= eps;
        if (M >= M_threshold) member_ok = member_ok && member;
        if (member && first_member < 0) first_member = M;
    }
    report.add_table("gdelta_ledger", table, opts.out_dir);
    json& r = report.results();
    r["first_member_M"] = first_member;
    r["l2_distance_bound"] = std::sqrt(gdelta_ledger(M_max, eps, q, dim, chi).sum_eps_sq);
    report.check("l2_budget", budget_ok, "sum eps_j^2 <= eps for M = 1.." + std::to_string(M_max));
    report.check("gm_membership_ledger", member_ok,
                 "ledger L^q norm above log log M for M >= " + std::to_string(M_threshold));

    const json& gc = c.at("grid_check");
    const int packets = gc.at("packets").get<int>();
    if (dim == 1 && packets > 0) {
        const TorusGrid grid(1, gc.at("N").get<int>());
        const auto [v, led] = make_gdelta_sum(SpectrumField(grid), 0, packets, eps, q, grid, chi);
        const double lq = lebesgue_norm(v, q);
        const double rel = std::abs(lq - led.lq_norm()) / led.lq_norm();
        r["grid_check"] = {{"packets", packets}, {"grid_lq", lq}, {"ledger_lq", led.lq_norm()},
                           {"relative_difference", rel}, {"l2", lebesgue_norm(v, 2.0)},
                           {"sum_eps_sq", led.sum_eps_sq}};
        report.check("grid_vs_ledger", rel <= 0.05, "grid " + fmt(lq) + " vs ledger " + fmt(led.lq_norm()));

        // G_M membership of the grid prefix at the frequency cutoffs the grid can represent.
        const SpectrumField vh = forward_transform(v);
        CsvTable member({"M", "loglog_M", "lq_low_pass", "membership"});
        for (long long M = 16; M <= grid.points_per_axis() / 2; M *= 4) {
            const double lqm = lebesgue_norm(inverse_transform(low_pass(vh, M)), q);
            member.add_row({static_cast<double>(M), std::log(std::log(static_cast<double>(M))), lqm,
                            gm_membership(vh, M, q) ? 1.0 : 0.0});
        }
        report.add_table("gdelta_grid_membership", member, opts.out_dir);
    } else {
        r["grid_check"] = {{"skipped", "grid check runs in d=1 only"}};
    }
    return report;
}

}  // namespace wavelab
