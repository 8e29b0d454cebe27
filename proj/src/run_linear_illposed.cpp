#include <wavelab/experiments.hpp>
#include <wavelab/fit.hpp>
#include <wavelab/quadrature.hpp>
#include <wavelab/wave_solver.hpp>

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

// int |(chi(y - tau) + chi(y + tau)) / 2|^q dy for the 1D profile chi.
double split_lq_power(const BumpSpec& chi, double q, double tau)
{
    const double R = chi.support_radius;
    auto c = [&](double y) { return bump_profile(chi.shape, chi.exponent, std::abs(y) / R); };
    if (tau >= R) return 2.0 * std::pow(0.5, q) * std::pow(bump_lq_norm(chi, q), q);
    return integrate([&](double y) { return std::pow(std::abs(0.5 * (c(y - tau) + c(y + tau))), q); },
                     -tau - R, tau + R, 64, 20);
}

struct MPoint {
    int M = 0;
    double t = 0.0;
    int resolved = 0;
    double l2 = 0.0;
    double lq = 0.0;
    double l2_grid = 0.0;
    double lq_grid = 0.0;
    double prefix_grid = 0.0;    // L^q of the evolved resolvable packets alone
    double prefix_ledger = 0.0;  // same from the closed form
    double leakage = 0.0;
};

}  // namespace

Report run_linear_illposed(const json& cfg, const RunOptions& opts)
{
    Report report("linear-illposed", cfg);
    const json& c = cfg.at("illposed");
    const int dim = cfg.at("grid").at("dim").get<int>();
    const int N = cfg.at("grid").at("N").get<int>();
    const TorusGrid grid(dim, N);
    const double eps = c.at("eps").get<double>();
    const double q = c.at("q").get<double>();
    const double tail_fraction = c.at("tail_fraction").get<double>();
    if (!(eps > 0.0)) throw ConfigurationError("illposed.eps must be positive");
    if (!(q > 2.0)) throw ConfigurationError("illposed.q must exceed 2");
    std::vector<int> Ms;
    for (double m : detail::number_list(c.at("M"), "illposed.M")) {
        if (m != std::floor(m) || m < 0 || m > 9) throw ConfigurationError("illposed.M entries must be integers in [0, 9]");
        Ms.push_back(static_cast<int>(m));
    }
    BumpSpec chi = detail::parse_bump(c.at("chi"), dim);
    const double chi_l2 = bump_lq_norm(chi, 2.0);
    const double R = chi.support_radius;

    auto scale = [](int j) { return std::exp2(gdelta_log2_scale(j)); };
    auto resolvable = [&](int j) { return 2.0 * R / scale(j) / grid.spacing() >= 8.0; };

    // Preconditions: resolution (d > 1) and disjoint light cones at t_M.
    for (int M : Ms) {
        const double t = std::exp2(-(M + 10));
        for (int j = 1; j <= M; ++j) {
            if (dim > 1 && !resolvable(j))
                throw ResolutionError("linear-illposed: packet " + std::to_string(j) + " is not resolved in d=" +
                                      std::to_string(dim));
            for (int i = 1; i < j; ++i)
                if (std::abs(gdelta_position(j) - gdelta_position(i)) <= R / scale(i) + R / scale(j) + 2.0 * t)
                    throw ScheduleError("linear-illposed: packets " + std::to_string(i) + " and " + std::to_string(j) +
                                        " overlap at t_M for M=" + std::to_string(M));
        }
    }

    const RandomizationSpec u0_spec = detail::parse_trig(c.at("u0"), dim, 0);
    const SpectrumField u0h = forward_transform(trig_field(u0_spec, grid));
    long long cut = 0;
    SpectrumField tail_h = u0h - low_pass(u0h, 0);
    while (sobolev_norm(tail_h, 0.0) >= tail_fraction * eps) {
        if (++cut > N / 2) throw ConfigurationError("illposed.u0: no cutoff brings the tail below the threshold");
        tail_h = u0h - low_pass(u0h, cut);
    }
    const GridField tail = inverse_transform(tail_h);
    const double tail_l2 = lebesgue_norm(tail, 2.0);
    const double tail_lq = lebesgue_norm(tail, q);

    std::vector<MPoint> pts(Ms.size());
    parallel_for(Ms.size(), cfg.at("threads").get<int>(), [&](std::size_t idx) {
        MPoint& pt = pts[idx];
        pt.M = Ms[idx];
        pt.t = std::exp2(-(pt.M + 10));
        while (pt.resolved < pt.M && resolvable(pt.resolved + 1)) ++pt.resolved;

        GridField packets(grid);
        std::vector<Box> boxes;
        double ledger_prefix = 0.0;
        for (int j = 1; j <= pt.resolved; ++j) {
            Eigen::Vector3d center = Eigen::Vector3d::Zero();
            center[0] = gdelta_position(j);
            const double amp = gdelta_amplitude(j, eps) / chi_l2;
            packets = packets + make_wk_packet(scale(j), amp, center, chi, grid);
            Box b;
            b.center = center;
            for (int a = 0; a < dim; ++a) b.half_width[a] = R / scale(j);
            boxes.push_back(b);
            if (dim == 1)
                ledger_prefix += std::pow(amp, q) * std::pow(scale(j), 0.5 * q - 1.0) * split_lq_power(chi, q, scale(j) * pt.t);
        }
        const WaveState moved = linear_flow(WaveState(tail - packets, GridField(grid), 0.0), pt.t);
        pt.l2_grid = lebesgue_norm(moved.u, 2.0);
        pt.lq_grid = lebesgue_norm(moved.u, q);
        double l2_sq = pt.l2_grid * pt.l2_grid;
        double lq_pow = std::pow(pt.lq_grid, q);
        for (int j = pt.resolved + 1; j <= pt.M; ++j) {
            const double amp = gdelta_amplitude(j, eps) / chi_l2;
            const double tau = scale(j) * pt.t;
            l2_sq += amp * amp * split_lq_power(chi, 2.0, tau);
            lq_pow += std::pow(amp, q) * std::pow(scale(j), 0.5 * q - 1.0) * split_lq_power(chi, q, tau);
        }
        pt.l2 = std::sqrt(l2_sq);
        pt.lq = std::pow(lq_pow, 1.0 / q);
        if (pt.resolved > 0) {
            const WaveState alone = linear_flow(WaveState(packets, GridField(grid), 0.0), pt.t);
            pt.prefix_grid = lebesgue_norm(alone.u, q);
            pt.prefix_ledger = dim == 1 ? std::pow(ledger_prefix, 1.0 / q) : 0.0;
            pt.leakage = light_cone_leakage(alone, boxes, pt.t);
        }
    });

    CsvTable table({"M", "t_M", "resolved_packets", "l2_distance", "lq_distance", "l2_grid_part", "lq_grid_part",
                    "prefix_lq_grid", "prefix_lq_ledger", "leakage"});
    std::vector<double> l2s, lqs;
    for (const auto& pt : pts) {
        table.add_row({static_cast<double>(pt.M), pt.t, static_cast<double>(pt.resolved), pt.l2, pt.lq, pt.l2_grid,
                       pt.lq_grid, pt.prefix_grid, pt.prefix_ledger, pt.leakage});
        l2s.push_back(pt.l2);
        if (pt.M >= 1) lqs.push_back(pt.lq);
    }
    report.add_table("linear_illposed", table, opts.out_dir);
    json& r = report.results();
    r["tail"] = {{"cutoff", cut}, {"l2", tail_l2}, {"lq", tail_lq}};
    r["chi_l2"] = chi_l2;

    const double l2_min = *std::min_element(l2s.begin(), l2s.end());
    const double l2_max = *std::max_element(l2s.begin(), l2s.end());
    report.check("l2_constant", l2_max <= 1.05 * l2_min,
                 "L2 distance ranges over [" + fmt(l2_min) + ", " + fmt(l2_max) + "]");
    for (const auto& pt : pts)
        if (pt.M == 0)
            report.check("m0_equals_tail", std::abs(pt.l2 - tail_l2) <= 1e-2 * tail_l2 &&
                                               std::abs(pt.lq - tail_lq) <= 1e-2 * tail_lq,
                         "M=0 distances " + fmt(pt.l2) + ", " + fmt(pt.lq) + " vs tail " + fmt(tail_l2) + ", " +
                             fmt(tail_lq));
    report.check("lq_increasing", lqs.size() >= 2 && strictly_increasing(lqs), "L^q distance over M >= 1");
    for (const auto& pt : pts) {
        if (pt.resolved == 0) continue;
        const std::string tag = "[M=" + std::to_string(pt.M) + "]";
        if (dim == 1) {
            const double rel = std::abs(pt.prefix_grid - pt.prefix_ledger) / pt.prefix_ledger;
            report.check("prefix_grid_vs_ledger" + tag, rel <= 0.05,
                         "grid " + fmt(pt.prefix_grid) + " vs ledger " + fmt(pt.prefix_ledger));
        }
        report.check("leakage" + tag, pt.leakage <= 1e-6, "leakage " + fmt(pt.leakage));
    }
    return report;
}

}  // namespace wavelab
