#pragma once

#include <wavelab/csv.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace wavelab {

struct RunOptions {
    std::filesystem::path out_dir;  // empty: no files written
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

struct Assertion {
    std::string name;
    bool passed = false;
    std::string detail;
};

class Report {
public:
    Report(std::string experiment, nlohmann::json config);

    nlohmann::json& results() { return results_; }
    const nlohmann::json& results() const { return results_; }
    const nlohmann::json& config() const { return config_; }
    const std::vector<Assertion>& assertions() const { return assertions_; }

    void check(const std::string& name, bool passed, const std::string& detail = "");
    bool passed() const;
    const Assertion* find(const std::string& name) const;

    // Writes the table as <name>.csv (when an output directory is set) and embeds it.
    void add_table(const std::string& name, const CsvTable& table, const std::filesystem::path& out_dir);

    nlohmann::json to_json() const;
    void write(const std::filesystem::path& out_dir) const;

private:
    std::string experiment_;
    nlohmann::json config_;
    nlohmann::json results_ = nlohmann::json::object();
    std::vector<Assertion> assertions_;
};

const std::vector<std::string>& experiment_ids();

// Built-in defaults for an experiment id.
nlohmann::json default_config(const std::string& id);

// Defaults merged with the user's config, CLI overrides applied, keys validated.
nlohmann::json resolve_config(const std::string& id, const nlohmann::json& user, const RunOptions& opts);

Report run_profile(const nlohmann::json& cfg, const RunOptions& opts);
Report run_inflate(const nlohmann::json& cfg, const RunOptions& opts);
Report run_lemma_bt(const nlohmann::json& cfg, const RunOptions& opts);
Report run_linear_illposed(const nlohmann::json& cfg, const RunOptions& opts);
Report run_gdelta(const nlohmann::json& cfg, const RunOptions& opts);
Report run_random_lq(const nlohmann::json& cfg, const RunOptions& opts);
Report run_instant(const nlohmann::json& cfg, const RunOptions& opts);

// Resolves the config, runs, writes report.json when an output directory is set.
// Construction errors are recorded as a failed assertion rather than thrown.
Report run_experiment(const std::string& id, const nlohmann::json& user_config, const RunOptions& opts);

// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace wavelab
