#include <wavelab/error.hpp>
#include <wavelab/experiments.hpp>

#include "experiment_util.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <thread>

namespace wavelab {

using nlohmann::json;

Report::Report(std::string experiment, json config)
    : experiment_(std::move(experiment)), config_(std::move(config))
{
}

void Report::check(const std::string& name, bool passed, const std::string& detail)
{
    assertions_.push_back({name, passed, detail});
}

bool Report::passed() const
{
    return std::all_of(assertions_.begin(), assertions_.end(), [](const Assertion& a) { return a.passed; });
}

const Assertion* Report::find(const std::string& name) const
{
    for (const auto& a : assertions_)
        if (a.name == name) return &a;
    return nullptr;
}

void Report::add_table(const std::string& name, const CsvTable& table, const std::filesystem::path& out_dir)
{
    results_["tables"][name] = table.to_json();
    if (!out_dir.empty()) table.write(out_dir / (name + ".csv"));
}

json Report::to_json() const
{
    json a = json::array();
    for (const auto& x : assertions_) a.push_back({{"name", x.name}, {"passed", x.passed}, {"detail", x.detail}});
    return {{"experiment", experiment_}, {"config", config_}, {"results", results_}, {"assertions", a},
            {"passed", passed()}};
}

void Report::write(const std::filesystem::path& out_dir) const
{
    std::filesystem::create_directories(out_dir);
    std::ofstream out(out_dir / "report.json");
    if (!out) throw ConfigurationError("cannot write report.json in " + out_dir.string());
    out << to_json().dump(2) << '\n';
}

const std::vector<std::string>& experiment_ids()
{
    static const std::vector<std::string> ids{"profile", "inflate", "lemma-bt", "linear-illposed",
                                              "gdelta", "random-lq", "instant"};
    return ids;
}

namespace {

json family_defaults()
{
    return {{"p", 3.0}, {"s", 0.25}, {"delta1", 0.1}, {"delta2", 0.05}};
}

json solver_defaults()
{
    return {{"padding", 2}, {"dt_factor", 1.0}, {"blowup_factor", 1e6}};
}

json illposed_u0()
{
    json modes = json::array();
    for (int m = 1; m <= 64; ++m) modes.push_back({{"m", {m}}, {"a", 1.0 / (m * m)}, {"b", 0.0}});
    return {{"a0", 0.0}, {"modes", modes}};
}

}  // namespace

json default_config(const std::string& id)
{
    json c = {{"experiment", id}, {"seed", 1}, {"threads", 1}};
    if (id == "profile") {
        c["profile"] = {{"p", {3.0, 3.5, 4.0, 4.9}}, {"tol", 1e-10}, {"periods", 10}};
    } else if (id == "inflate") {
        c["params"] = family_defaults();
        c["grid"] = {{"dim", 3}, {"N", 64}};
        c["bump"] = {{"shape", "exponential_bump"}, {"radius", 2.0}, {"exponent", 8.0}};
        c["solver"] = solver_defaults();
        c["inflate"] = {{"n", {8, 16, 32, 64}}, {"domain", "patch"}, {"samples", 32},
                        {"nonlinear", true}, {"negative_control", true},
                        {"u0", {{"a0", 0.0}, {"modes", json::array()}}},
                        {"u1", {{"a0", 0.0}, {"modes", json::array()}}}};
    } else if (id == "lemma-bt") {
        c["grid"] = {{"dim", 1}, {"N", 8192}};
        c["lemma"] = {{"p", 3.0}, {"s", {0.1, 0.25, 0.4}}, {"lambda", {4, 8, 16, 32, 64, 128, 256}},
                      {"profile", "oscillator"}, {"harmonics", 4},
                      {"psi", {{"shape", "exponential_bump"}, {"radius", 1.0}, {"exponent", 8.0}, {"center", {0.0, 0.0, 0.0}}}},
                      {"phi", {{"kind", "linear"}, {"slope", 2.0}, {"radius", 1.5}}}};
    } else if (id == "linear-illposed") {
        c["grid"] = {{"dim", 1}, {"N", 1 << 22}};
        c["illposed"] = {{"eps", 1e-2}, {"q", 4.0}, {"M", {0, 1, 2, 3, 4, 5}},
                         {"chi", {{"shape", "plateau"}, {"radius", 1.0}, {"exponent", 8.0}}},
                         {"tail_fraction", 0.5}, {"u0", illposed_u0()}};
    } else if (id == "gdelta") {
        c["gdelta"] = {{"eps", 1e-2}, {"q", 4.0}, {"dim", 1}, {"M_max", 40}, {"M_threshold", 16},
                       {"chi", {{"shape", "plateau"}, {"radius", 1.0}, {"exponent", 8.0}}},
                       {"grid_check", {{"N", 1 << 23}, {"packets", 3}}}};
    } else if (id == "random-lq") {
        c["random_lq"] = {{"dim", 1}, {"N", 64}, {"q", {4}}, {"samples", 10000},
                          {"specs", json::array()},
                          {"random", {{"count", 10}, {"modes", 5}, {"max_freq", 6}, {"unit_mass", true}}},
                          {"single_mode", true}};
    } else if (id == "instant") {
        c["params"] = family_defaults();
        c["grid"] = {{"dim", 3}, {"N", 64}};
        c["bump"] = {{"shape", "exponential_bump"}, {"radius", 2.0}, {"exponent", 8.0}};
        c["solver"] = solver_defaults();
        c["instant"] = {{"mode", "budget"}, {"k0", 1}, {"count", 4}, {"packets", json::array()}};
    } else {
        throw ConfigurationError("unknown experiment id: " + id);
    }
    return c;
}

namespace {

// Keys of `user` must exist in `defaults` (objects are checked recursively; arrays are free).
void check_keys(const json& user, const json& defaults, const std::string& where)
{
    if (!user.is_object()) throw ConfigurationError(where + ": expected an object");
    for (const auto& [key, value] : user.items()) {
        if (!defaults.contains(key)) throw ConfigurationError(where + ": unknown key '" + key + "'");
        const auto& d = defaults.at(key);
        if (d.is_object() && !d.empty()) check_keys(value, d, where + "." + key);
    }
}

}  // namespace

json resolve_config(const std::string& id, const json& user, const RunOptions& opts)
{
    json cfg = default_config(id);
    if (!user.is_null()) {
        check_keys(user, cfg, "config");
        if (user.contains("experiment") && user.at("experiment") != id)
            throw ConfigurationError("config is for experiment '" + user.at("experiment").get<std::string>() +
                                     "', not '" + id + "'");
        cfg.merge_patch(user);
    }
    if (opts.seed) cfg["seed"] = *opts.seed;
    if (opts.threads) cfg["threads"] = *opts.threads;
    if (!cfg.at("seed").is_number_unsigned() && !(cfg.at("seed").is_number_integer() && cfg.at("seed").get<long long>() >= 0))
        throw ConfigurationError("seed must be a non-negative integer");
    if (cfg.at("threads").get<int>() < 1) throw ConfigurationError("threads must be >= 1");
    return cfg;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn)
{
    const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

Report run_experiment(const std::string& id, const json& user_config, const RunOptions& opts)
{
    const json cfg = resolve_config(id, user_config, opts);
    if (!opts.out_dir.empty()) std::filesystem::create_directories(opts.out_dir);
    Report report(id, cfg);
    try {
        if (id == "profile") report = run_profile(cfg, opts);
        else if (id == "inflate") report = run_inflate(cfg, opts);
        else if (id == "lemma-bt") report = run_lemma_bt(cfg, opts);
        else if (id == "linear-illposed") report = run_linear_illposed(cfg, opts);
        else if (id == "gdelta") report = run_gdelta(cfg, opts);
        else if (id == "random-lq") report = run_random_lq(cfg, opts);
        else report = run_instant(cfg, opts);
    } catch (const ConfigurationError&) {
        throw;
    } catch (const Error& e) {
        report.check("construction", false, e.what());
    }
    if (!opts.out_dir.empty()) report.write(opts.out_dir);
    return report;
}

namespace detail {

BumpSpec parse_bump(const json& j, int dim)
{
    BumpSpec b;
    b.dim = dim;
    b.shape = parse_bump_shape(j.value("shape", std::string("exponential_bump")));
    b.support_radius = j.value("radius", 1.0);
    b.exponent = j.value("exponent", 8.0);
    if (j.contains("center")) b.center = parse_point(j.at("center"));
    return b;
}

Eigen::Vector3d parse_point(const json& j)
{
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    if (!j.is_array() || j.size() > 3) throw ConfigurationError("point: expected up to 3 coordinates");
    for (std::size_t i = 0; i < j.size(); ++i) x[static_cast<Eigen::Index>(i)] = j.at(i).get<double>();
    return x;
}

DataFamilyParams parse_family(const json& j)
{
    DataFamilyParams p;
    p.p = j.at("p").get<double>();
    p.s = j.at("s").get<double>();
    p.delta1 = j.at("delta1").get<double>();
    p.delta2 = j.at("delta2").get<double>();
    validate(p);
    return p;
}

RandomizationSpec parse_trig(const json& j, int dim, std::uint64_t seed)
{
    RandomizationSpec spec;
    spec.a0 = j.value("a0", 0.0);
    spec.seed = seed;
    for (const auto& m : j.value("modes", json::array())) {
        TrigMode mode;
        const auto& freq = m.at("m");
        if (!freq.is_array() || freq.size() != static_cast<std::size_t>(dim))
            throw ConfigurationError("trig mode: frequency must have dim entries");
        for (int i = 0; i < dim; ++i) mode.m[static_cast<std::size_t>(i)] = freq.at(static_cast<std::size_t>(i)).get<int>();
        mode.a = m.value("a", 0.0);
        mode.b = m.value("b", 0.0);
        spec.modes.push_back(mode);
    }
    return spec;
}

json to_json(const RandomizationSpec& spec)
{
    json modes = json::array();
    for (const auto& m : spec.modes) modes.push_back({{"m", m.m}, {"a", m.a}, {"b", m.b}});
    return {{"a0", spec.a0}, {"modes", modes}};
}

std::vector<double> number_list(const json& j, const std::string& what)
{
    if (!j.is_array() || j.empty()) throw ConfigurationError(what + ": expected a nonempty list");
    std::vector<double> out;
    for (const auto& x : j) out.push_back(x.get<double>());
    return out;
}

}  // namespace detail

}  // namespace wavelab
