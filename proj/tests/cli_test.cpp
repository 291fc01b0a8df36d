#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "uowcsec/cli/experiment.hpp"
#include "uowcsec/cli/output.hpp"
#include "uowcsec/cli/recipes.hpp"
#include "uowcsec/cli/registry.hpp"
#include "uowcsec/cli/runner.hpp"
#include "uowcsec/cli/validate.hpp"

namespace {

using namespace uowcsec;
using namespace uowcsec::cli;
namespace fs = std::filesystem;

Registry default_registry() { return Registry::load(UOWCSEC_DEFAULT_REGISTRY); }

constexpr const char* kSweepConfig = R"([system]
scenario = colluding
n_eav = 2
p_b_db = 20

[rd]
phi_db = 15
mu = 3

[sweep]
parameter = rd.phi_db
start = 0
stop = 20
step = 2.5
)";

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ExperimentConfig, EchoRoundTrip) {
  const ExperimentConfig cfg = parse_experiment(kSweepConfig);
  EXPECT_EQ(cfg.n_eav, 2);
  EXPECT_EQ(cfg.rd.mu, 3.0);
  EXPECT_EQ(cfg.rd.kappa, 1.0);  // default kept
  const std::string echoed = to_ini(cfg);
  EXPECT_EQ(parse_experiment(echoed), cfg);
  EXPECT_EQ(to_ini(parse_experiment(echoed)), echoed);
  EXPECT_EQ(parse_experiment(to_ini(ExperimentConfig{})), ExperimentConfig{});
}

TEST(ExperimentConfig, FieldLevelErrors) {
  EXPECT_NE(message_of([] { parse_experiment("[sr]\nwater = none\nomega = 1.5\nlambda = 1\na = 1\nb = 1\nc = 1\n"); })
                .find("[sr] omega = 1.5 must lie in (0, 1)"),
            std::string::npos);
  EXPECT_NE(message_of([] { parse_experiment("[rd]\nfading = 3\n"); }).find("unknown key [rd] fading"),
            std::string::npos);
  EXPECT_NE(message_of([] { parse_experiment("[system]\nn_eav = 2.5\n"); }).find("n_eav"), std::string::npos);
  EXPECT_NE(message_of([] { parse_experiment("[sr]\nepsilon = 3\n"); }).find("[sr] epsilon"), std::string::npos);
  EXPECT_NE(message_of([] { parse_experiment("[sr]\nomega = 0.3\n"); }).find("set water = none"), std::string::npos);
  EXPECT_NE(message_of([] { parse_experiment("[sweep]\nparameter = rd.phi_db\nstart = 5\nstop = 0\nstep = 1\n"); })
                .find("wrong sign"),
            std::string::npos);
  EXPECT_NE(message_of([] { parse_experiment("[sweep]\nparameter = sr.water\nstop = 1\n"); }).find("not a numeric"),
            std::string::npos);
  EXPECT_NE(message_of([] {
              parse_experiment("[system]\nscenario = colluding\nn_eav = 2\n[run]\nengine = mc\n[mc]\nmode = max\n");
            }).find("does not match"),
            std::string::npos);
  EXPECT_NE(message_of([] { parse_experiment("[run]\nengine = mc\n[mc]\nn = 500\n"); }).find("[mc] n = 500"),
            std::string::npos);
  EXPECT_THROW(parse_experiment("[rd]\nkappa = -1\n"), ConfigError);
  EXPECT_THROW(parse_experiment("[rd]\ng = 0\n"), ConfigError);
}

TEST(ExperimentConfig, ParameterNames) {
  ExperimentConfig cfg;
  set_parameter(cfg, "p_b_db", "7.5");
  EXPECT_EQ(cfg.p_b_db, 7.5);
  set_parameter(cfg, "re.phi_db", 3.0);
  EXPECT_EQ(cfg.re.phi_db, 3.0);
  set_parameter(cfg, "rd.g", 4.0);
  EXPECT_EQ(cfg.rd.g, 4);
  EXPECT_THROW(set_parameter(cfg, "phi_db", "1"), ConfigError);  // three sections have it
  EXPECT_THROW(set_parameter(cfg, "rd.g", 2.5), ConfigError);
  EXPECT_THROW(set_parameter(cfg, "nope", "1"), ConfigError);
}

TEST(ExperimentConfig, SweepGrid) {
  const ExperimentConfig cfg = parse_experiment(kSweepConfig);
  const auto xs = cfg.sweep.values();
  ASSERT_EQ(xs.size(), 9u);
  EXPECT_EQ(xs.front(), 0.0);
  EXPECT_EQ(xs.back(), 20.0);
  SweepAxis tenth{"system.r_s", 0.1, 1.0, 0.1};
  EXPECT_EQ(tenth.values().size(), 10u);
}

TEST(Registry, ParsesEntries) {
  const Registry reg = Registry::parse(R"(# measured
[registry."salty/0/0.1"]
omega = 0.3
lambda = 0.4
a = 1.2
b = 0.9
c = 1.5
provenance = bench run 3
)");
  ASSERT_EQ(reg.entries().size(), 1u);
  const auto& e = reg.lookup({"salty", 0.0, 0.1});
  EXPECT_EQ(e.lambda, 0.4);
  EXPECT_FALSE(e.is_placeholder());
  EXPECT_TRUE(reg.provenance_warnings().empty());
  EXPECT_NE(message_of([&] { (void)reg.lookup({"fresh", 0.0, 0.1}); }).find("known: salty/0/0.1"), std::string::npos);
}

TEST(Registry, RejectsMalformedEntries) {
  const std::string entry = "omega = 0.3\nlambda = 0.4\na = 1.2\nb = 0.9\nc = 1.5\n";
  EXPECT_THROW(Registry::parse("[fresh]\n" + entry), ConfigError);
  EXPECT_THROW(Registry::parse("[registry.\"muddy/1/1\"]\n" + entry), ConfigError);
  EXPECT_THROW(Registry::parse("[registry.\"fresh/x/1\"]\n" + entry), ConfigError);
  EXPECT_THROW(Registry::parse("[registry.\"fresh/1/1\"]\n" + entry + "depth = 3\n"), ConfigError);
  EXPECT_THROW(Registry::parse("[registry.\"fresh/1/1\"]\nomega = 1.2\nlambda = 1\na = 1\nb = 1\nc = 1\n"),
               ConfigError);
  EXPECT_THROW(Registry::parse("[registry.\"fresh/1/1\"]\nomega = 0.3\n"), ConfigError);
  EXPECT_THROW(Registry::parse("[registry.\"fresh/1/1\"]\n" + entry + "\n[registry.\"fresh/1.0/1\"]\n" + entry),
               ConfigError);
}

TEST(Registry, ShippedEntriesAreFlaggedPlaceholders) {
  const Registry reg = default_registry();
  ASSERT_FALSE(reg.entries().empty());
  EXPECT_NE(reg.find({"fresh", 2.4, 0.05}), nullptr);
  EXPECT_EQ(reg.provenance_warnings().size(), reg.entries().size());
}

TEST(Output, CsvFormatting) {
  EXPECT_EQ(csv_number(0.25), "2.5000000000e-01");
  EXPECT_EQ(csv_number(NAN), "");
  EXPECT_EQ(csv_quote("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_quote("say \"hi\""), "\"say \"\"hi\"\"\"");
  std::ostringstream out;
  CsvWriter w(out, "rd.phi_db");
  EXPECT_EQ(out.str(), "series,rd.phi_db,metric,engine,value,ci_low,ci_high,n,terms_used,warnings\n");
}

std::string sweep_csv(ExperimentConfig cfg, int jobs) {
  cfg.jobs = jobs;
  std::ostringstream out;
  CsvWriter w(out, cfg.sweep.parameter);
  run_sweep(cfg, default_registry(), "s", &w);
  return out.str();
}

TEST(Runner, AnalyticSweepIndependentOfJobs) {
  const ExperimentConfig cfg = parse_experiment(kSweepConfig);
  const std::string one = sweep_csv(cfg, 1);
  EXPECT_EQ(sweep_csv(cfg, 4), one);
  EXPECT_EQ(std::count(one.begin(), one.end(), '\n'), 10);
}

TEST(Runner, MonteCarloSweepIndependentOfJobs) {
  ExperimentConfig cfg = parse_experiment(kSweepConfig);
  cfg.engine = Engine::Both;
  cfg.n = 20'000;
  cfg.sweep = {"rd.phi_db", 5.0, 15.0, 5.0};
  const std::string one = sweep_csv(cfg, 1);
  EXPECT_EQ(sweep_csv(cfg, 3), one);
  EXPECT_NE(one.find(",mc-mrc,"), std::string::npos);
  EXPECT_NE(one.find(",analytic,"), std::string::npos);
}

TEST(Runner, PointAgreesWithMonteCarlo) {
  ExperimentConfig cfg = parse_experiment("[system]\nn_eav = 2\n[run]\nengine = both\n[mc]\nn = 200000\nseed = 4\n");
  const PointResult p = evaluate_point(cfg, default_registry());
  ASSERT_TRUE(p.analytic && p.mc);
  EXPECT_TRUE(within_sigma(p)) << p.analytic->value << " vs " << p.mc->mean;
}

TEST(Recipes, ShapeChecker) {
  EXPECT_TRUE(check_shape(Shape::NonIncreasing, {3, 2, 2, 1}));
  EXPECT_FALSE(check_shape(Shape::NonIncreasing, {3, 2, 2.5}));
  EXPECT_TRUE(check_shape(Shape::NonDecreasing, {1, 1 - 1e-14, 2}));
  EXPECT_TRUE(check_shape(Shape::Unimodal, {1, 3, 2}));
  EXPECT_FALSE(check_shape(Shape::Unimodal, {1, 2, 3}));
  EXPECT_FALSE(check_shape(Shape::Unimodal, {1, 3, 2, 2.5}));
}

TEST(Recipes, EveryRecipeMeetsItsShape) {
  const Registry reg = default_registry();
  for (const auto& r : recipes()) {
    const FigureResult f = run_figure(r, reg, {}, nullptr);
    EXPECT_TRUE(f.shapes_ok()) << r.id;
    EXPECT_FALSE(f.notes.empty()) << r.id;  // placeholder registry
    for (const auto& s : f.series) EXPECT_FALSE(s.points.empty()) << r.id << ' ' << s.label;
  }
  EXPECT_THROW(find_recipe("fig99"), ConfigError);
  EXPECT_EQ(find_recipe("table1").series.size(), TableReference::eavesdroppers.size());
}

TEST(Validate, QuickLevelPasses) {
  const ValidateReport rep = run_validation(ValidateLevel::Quick, default_registry());
  EXPECT_TRUE(rep.passed());
  const auto j = rep.to_json();
  EXPECT_EQ(j["level"], "quick");
  EXPECT_FALSE(j["warnings"].empty());
}

// Tool-level behavior through the built executable.
class Tool : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("uowcsec_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  int run(const std::string& args, const std::string& stdout_name = "stdout.txt") const {
    const std::string cmd = std::string(UOWCSEC_CLI_PATH) + " " + args + " > " + (dir_ / stdout_name).string() +
                            " 2> " + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string out(const std::string& name = "stdout.txt") const { return slurp(dir_ / name); }
  std::string err() const { return slurp(dir_ / "stderr.txt"); }

  fs::path dir_;
};

TEST_F(Tool, EchoIsAFixedPoint) {
  const fs::path cfg = write("a.ini", kSweepConfig);
  ASSERT_EQ(run("eval --echo --config " + cfg.string()), 0) << err();
  const std::string first = out();
  const fs::path again = write("b.ini", first);
  ASSERT_EQ(run("eval --echo --config " + again.string()), 0) << err();
  EXPECT_EQ(out(), first);
}

TEST_F(Tool, ConfigurationErrorsExitTwo) {
  const fs::path bad = write("bad.ini", "[sr]\nwater = none\nomega = 1.5\nlambda = 1\na = 1\nb = 1\nc = 1\n");
  EXPECT_EQ(run("eval --config " + bad.string()), 2);
  EXPECT_NE(err().find("[sr] omega = 1.5 must lie in (0, 1)"), std::string::npos) << err();
  EXPECT_EQ(run("eval --config " + write("u.ini", "[rd]\nspeed = 1\n").string()), 2);
  EXPECT_EQ(run("eval --config " + (dir_ / "missing.ini").string()), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("figure fig99"), 2);
  EXPECT_EQ(run("validate --level medium"), 2);
}

TEST_F(Tool, EvalReportsAndNotesPlaceholders) {
  const fs::path cfg = write("p.ini", "[system]\nn_eav = 2\n");
  ASSERT_EQ(run("eval --config " + cfg.string()), 0) << err();
  EXPECT_NE(out().find("sop (analytic) = "), std::string::npos) << out();
  EXPECT_NE(err().find("placeholder"), std::string::npos);
  EXPECT_EQ(out().find("placeholder"), std::string::npos);
}

TEST_F(Tool, SweepCsvStableAcrossJobs) {
  const fs::path cfg = write("s.ini", std::string(kSweepConfig) + "\n[run]\nengine = both\n[mc]\nn = 20000\n");
  ASSERT_EQ(run("sweep --config " + cfg.string() + " --jobs 1 --out " + (dir_ / "one.csv").string()), 0) << err();
  ASSERT_EQ(run("sweep --config " + cfg.string() + " --jobs 8 --out " + (dir_ / "eight.csv").string()), 0) << err();
  const std::string one = slurp(dir_ / "one.csv");
  EXPECT_FALSE(one.empty());
  EXPECT_EQ(slurp(dir_ / "eight.csv"), one);
}

TEST_F(Tool, ValidateQuickEmitsJson) {
  ASSERT_EQ(run("validate --level quick"), 0) << err();
  const auto j = nlohmann::json::parse(out());
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_GT(j["properties"].size(), 0u);
}

TEST_F(Tool, TableComparisonSkippedWithPlaceholders) {
  ASSERT_EQ(run("figure table1 --out " + (dir_ / "t.csv").string()), 0) << err();
  EXPECT_NE(err().find("published-table comparison skipped"), std::string::npos) << err();
  const std::string csv = slurp(dir_ / "t.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 4 * 13);
}

}  // namespace
