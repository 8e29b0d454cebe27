#include <wavelab/error.hpp>
#include <wavelab/experiments.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"Numerical experiments for the supercritical nonlinear wave equation"};
    std::string experiment;
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int threads = 1;
    app.add_option("experiment", experiment, "Experiment id")
        ->required()
        ->check(CLI::IsMember(wavelab::experiment_ids()));
    app.add_option("--config", config_path, "JSON config file (defaults are used for missing keys)")
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Output directory")->required();
    auto* seed_opt = app.add_option("--seed", seed, "Base random seed");
    auto* threads_opt = app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    wavelab::RunOptions opts;
    opts.out_dir = out_dir;
    if (*seed_opt) opts.seed = seed;
    if (*threads_opt) opts.threads = threads;

    try {
        nlohmann::json user;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            user = nlohmann::json::parse(in);
        }
        const wavelab::Report report = wavelab::run_experiment(experiment, user, opts);
        for (const auto& a : report.assertions())
            std::cout << (a.passed ? "PASS " : "FAIL ") << a.name << (a.detail.empty() ? "" : "  " + a.detail) << '\n';
        std::cout << "report: " << (std::filesystem::path(out_dir) / "report.json").string() << '\n';
        return report.passed() ? 0 : 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const wavelab::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
