#include <wavelab/experiments.hpp>
#include <wavelab/stochastic.hpp>

#include "experiment_util.hpp"

#include <cmath>
#include <numbers>
#include <optional>
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

std::optional<double> oracle_for(const RandomizationSpec& spec, const TorusGrid& grid, int q)
{
    if (q != 4 && q != 6) return std::nullopt;
    return wick_oracle_moment(spec, grid, q);
}

}  // namespace

Report run_random_lq(const json& cfg, const RunOptions& opts)
{
    Report report("random-lq", cfg);
    const json& c = cfg.at("random_lq");
    const int dim = c.at("dim").get<int>();
    const TorusGrid grid(dim, c.at("N").get<int>());
    const long long samples = c.at("samples").get<long long>();
    const int threads = cfg.at("threads").get<int>();
    const auto seed = cfg.at("seed").get<std::uint64_t>();
    std::vector<int> qs;
    for (double q : detail::number_list(c.at("q"), "random_lq.q")) {
        if (q != std::floor(q) || q < 2 || static_cast<int>(q) % 2 != 0)
            throw ConfigurationError("random_lq.q entries must be even integers >= 2");
        qs.push_back(static_cast<int>(q));
    }

    std::vector<RandomizationSpec> specs;
    const json& explicit_specs = c.at("specs");
    if (!explicit_specs.empty()) {
        for (std::size_t i = 0; i < explicit_specs.size(); ++i)
            specs.push_back(detail::parse_trig(explicit_specs.at(i), dim, seed + i));
    } else {
        const json& rc = c.at("random");
        const int count = rc.at("count").get<int>();
        if (count < 1) throw ConfigurationError("random_lq.random.count must be >= 1");
        for (int i = 0; i < count; ++i) {
            RandomizationSpec s = random_spec(dim, rc.at("modes").get<int>(), rc.at("max_freq").get<int>(),
                                              seed + static_cast<std::uint64_t>(i), rc.at("unit_mass").get<bool>());
            s.seed = seed + static_cast<std::uint64_t>(i);
            specs.push_back(s);
        }
    }

    CsvTable table({"spec", "q", "samples", "mc_mean", "std_error", "oracle", "z_score", "mass", "moment_ratio"});
    json rows = json::array();
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const double mass = coefficient_mass(specs[i]);
        for (int q : qs) {
            const MomentEstimate est = mc_lq_moment(specs[i], grid, q, samples, threads);
            const auto oracle = oracle_for(specs[i], grid, q);
            json row = to_json(est, oracle.value_or(std::nan("")));
            row["spec"] = i;
            row["coefficients"] = detail::to_json(specs[i]);
            row["mass"] = mass;
            // (E |u|_q^q)^{1/q} / |u|_{l^2}, the constant in the moment bound
            const double ratio = std::pow(oracle.value_or(est.mean), 1.0 / q) / std::sqrt(mass);
            row["moment_ratio"] = ratio;
            const double z = oracle ? row.at("z_score").get<double>() : std::nan("");
            if (!oracle) row["oracle"] = nullptr, row["z_score"] = nullptr;
            rows.push_back(row);
            table.add_row({static_cast<double>(i), static_cast<double>(q), static_cast<double>(samples), est.mean,
                           est.std_error, oracle.value_or(std::nan("")), z, mass, ratio});
            if (oracle)
                report.check("wick_agreement[spec=" + std::to_string(i) + ",q=" + std::to_string(q) + "]",
                             std::abs(z) <= 3.0, "z = " + fmt(z));
        }
    }
    report.results()["moments"] = rows;
    report.add_table("random_lq", table, opts.out_dir);

    if (c.at("single_mode").get<bool>()) {
        RandomizationSpec one;
        TrigMode m;
        m.m = {1, 0, 0};
        m.a = 2.0;
        one.modes.push_back(m);
        one.seed = seed;
        // 2 alpha cos(x_1): 3 * 16 * int cos^4 = 36 pi per unit of the remaining axes
        const double exact = 36.0 * std::numbers::pi * std::pow(two_pi, dim - 1.0);
        const double oracle = wick_oracle_moment(one, grid, 4);
        const MomentEstimate est = mc_lq_moment(one, grid, 4, samples, threads);
        json row = to_json(est, oracle);
        row["closed_form"] = exact;
        report.results()["single_mode"] = row;
        report.check("single_mode_oracle", std::abs(oracle - exact) <= 1e-9 * exact,
                     "oracle " + fmt(oracle) + " vs " + fmt(exact));
        report.check("single_mode_mc", std::abs(row.at("z_score").get<double>()) <= 3.0,
                     "z = " + fmt(row.at("z_score").get<double>()));
    }
    return report;
}

}  // namespace wavelab
