#include <wavelab/error.hpp>
#include <wavelab/experiments.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace wavelab;
using nlohmann::json;

TEST(Config, DefaultsForEveryExperiment)
{
    for (const auto& id : experiment_ids()) {
        const json c = default_config(id);
        EXPECT_EQ(c.at("experiment"), id);
        EXPECT_TRUE(c.contains("seed"));
    }
    EXPECT_THROW(default_config("nope"), ConfigurationError);
}

TEST(Config, MergeAndValidation)
{
    RunOptions opts;
    opts.seed = 99;
    const json c = resolve_config("inflate", json{{"inflate", {{"n", {8, 16}}}}}, opts);
    EXPECT_EQ(c.at("inflate").at("n"), json({8, 16}));
    EXPECT_EQ(c.at("inflate").at("samples"), 32);
    EXPECT_EQ(c.at("seed"), 99);
    EXPECT_THROW(resolve_config("inflate", json{{"inflate", {{"bogus", 1}}}}, {}), ConfigurationError);
    EXPECT_THROW(resolve_config("inflate", json{{"experiment", "gdelta"}}, {}), ConfigurationError);
    RunOptions bad;
    bad.threads = 0;
    EXPECT_THROW(resolve_config("profile", json(), bad), ConfigurationError);
}

TEST(Config, ShippedConfigsResolve)
{
    const std::filesystem::path dir = std::filesystem::path(WAVELAB_SOURCE_DIR) / "configs";
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        std::ifstream in(entry.path());
        const json user = json::parse(in);
        EXPECT_NO_THROW(resolve_config(user.at("experiment").get<std::string>(), user, {})) << entry.path();
        ++count;
    }
    EXPECT_GE(count, 7);
}

TEST(ParallelFor, CoversEveryIndexAndPropagatesErrors)
{
    std::vector<int> hits(50, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) EXPECT_EQ(h, 1);
    EXPECT_THROW(parallel_for(5, 2, [](std::size_t i) { if (i == 3) throw DomainError("x"); }), DomainError);
}

TEST(Experiments, ProfileReport)
{
    const Report r = run_experiment("profile", json{{"profile", {{"p", {3.0}}}}}, {});
    EXPECT_TRUE(r.passed());
    const double period = r.results().at("profiles").at(0).at("period").get<double>();
    EXPECT_NEAR(period, 7.4163, 1e-4);
    EXPECT_LE(r.results().at("profiles").at(0).at("energy_drift").get<double>(), 1e-8);
}

TEST(Experiments, LemmaControls)
{
    const json cst = {{"lemma", {{"profile", "constant"}, {"s", {0.25}}}}};
    const Report a = run_experiment("lemma-bt", cst, {});
    EXPECT_TRUE(a.passed());
    EXPECT_NEAR(a.results().at("fits").at(0).at("fit").at("exponent").get<double>(), 0.0, 1e-9);

    const Report b = run_experiment("lemma-bt", json{{"lemma", {{"s", {0.0}}}}}, {});
    EXPECT_TRUE(b.passed());
    EXPECT_LT(std::abs(b.results().at("fits").at(0).at("fit").at("exponent").get<double>()), 0.05);

    const json fine = {{"grid", {{"N", 512}}}};
    const Report c = run_experiment("lemma-bt", fine, {});
    ASSERT_NE(c.find("construction"), nullptr);
    EXPECT_FALSE(c.passed());
}

TEST(Experiments, RandomLqReproducible)
{
    const json cfg = {{"random_lq", {{"samples", 300}, {"random", {{"count", 2}}}}}};
    RunOptions one, two;
    one.threads = 1;
    two.threads = 3;
    const Report a = run_experiment("random-lq", cfg, one);
    const Report b = run_experiment("random-lq", cfg, two);
    EXPECT_EQ(a.results().dump(), b.results().dump());
    RunOptions other;
    other.seed = 12345;
    const Report c = run_experiment("random-lq", cfg, other);
    EXPECT_NE(a.results().dump(), c.results().dump());
}

TEST(Experiments, GdeltaLedger)
{
    const json cfg = {{"gdelta", {{"M_max", 20}, {"grid_check", {{"N", 1 << 18}, {"packets", 1}}}}}};
    const Report r = run_experiment("gdelta", cfg, {});
    EXPECT_TRUE(r.passed());
    for (const auto& v : r.results().at("tables").at("gdelta_ledger").at("sum_eps_sq")) EXPECT_LE(v.get<double>(), 1e-2);
}

TEST(Experiments, LinearIllposedSmall)
{
    const json cfg = {{"grid", {{"N", 1 << 18}}}, {"illposed", {{"M", {0, 1, 2}}}}};
    const Report r = run_experiment("linear-illposed", cfg, {});
    ASSERT_NE(r.find("lq_increasing"), nullptr);
    EXPECT_TRUE(r.find("lq_increasing")->passed);
    EXPECT_TRUE(r.find("m0_equals_tail")->passed);
    EXPECT_TRUE(r.find("prefix_grid_vs_ledger[M=1]")->passed);
}

TEST(Experiments, InflateLinearControlAndTorusMode)
{
    const json lin = {{"grid", {{"dim", 1}, {"N", 256}}}, {"bump", {{"radius", 1.0}}},
                      {"inflate", {{"n", {3}}, {"domain", "torus"}, {"nonlinear", false}, {"samples", 4}}}};
    const Report r = run_experiment("inflate", lin, {});
    ASSERT_NE(r.find("no_inflation_linear"), nullptr);
    EXPECT_TRUE(r.find("no_inflation_linear")->passed);
    ASSERT_NE(r.find("negative_control"), nullptr);
    EXPECT_TRUE(r.find("negative_control")->passed);

    const json unresolved = {{"grid", {{"N", 16}}}, {"inflate", {{"n", {3, 40}}, {"domain", "torus"}}}};
    EXPECT_FALSE(run_experiment("inflate", unresolved, {}).passed());

    const json base = json::parse(R"({"inflate": {"u0": {"modes": [{"m": [1, 0, 0], "a": 0.1}]}}})");
    EXPECT_THROW(run_experiment("inflate", base, {}), ConfigurationError);
}

TEST(Experiments, InstantSinglePacketMatchesInflate)
{
    const json common = {{"grid", {{"dim", 1}, {"N", 256}}}, {"bump", {{"radius", 1.0}}}};
    json inst = common;
    inst["instant"] = {{"mode", "explicit"}, {"packets", {{{"n", 3}, {"center", {0.0}}}}}};
    json inf = common;
    inf["inflate"] = {{"n", {3}}, {"domain", "torus"}, {"negative_control", false}};
    const Report a = run_experiment("instant", inst, {});
    const Report b = run_experiment("inflate", inf, {});
    const double localized = a.results().at("tables").at("instant_evolution").at("localized_hs").at(0).get<double>();
    const double full = b.results().at("tables").at("inflate_sweep").at("u_hs_tn").at(0).get<double>();
    EXPECT_NEAR(localized / full, 1.0, 1e-3);
    ASSERT_NE(a.find("cross_talk"), nullptr);
    EXPECT_TRUE(a.find("cross_talk")->passed);
}

TEST(Experiments, InstantBudgetScheduleIsUnresolvable)
{
    const Report r = run_experiment("instant", json(), {});
    ASSERT_NE(r.find("construction"), nullptr);
    EXPECT_FALSE(r.find("construction")->passed);
    for (int k = 1; k <= 4; ++k) EXPECT_TRUE(r.find("budget[k=" + std::to_string(k) + "]")->passed);
}

TEST(Experiments, ReportWritten)
{
    const auto dir = std::filesystem::temp_directory_path() / "wavelab_report_test";
    std::filesystem::remove_all(dir);
    RunOptions opts;
    opts.out_dir = dir;
    run_experiment("profile", json{{"profile", {{"p", {3.0}}}}}, opts);
    std::ifstream in(dir / "report.json");
    const json rep = json::parse(in);
    EXPECT_EQ(rep.at("config").at("profile").at("p"), json({3.0}));
    EXPECT_TRUE(rep.at("passed").get<bool>());
    EXPECT_TRUE(std::filesystem::exists(dir / "profile_summary.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir / "profile_p3.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir / "profile_p3.json"));
    std::filesystem::remove_all(dir);
}
