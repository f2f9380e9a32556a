#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cslab/app/commands.hpp"

using namespace cslab;
using namespace cslab::app;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch_dir(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / ("cslab_test_" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig small_config(const fs::path &dir) {
  ExperimentConfig c;
  c.truncation = 64;
  c.time_grid = {0.0, 0.2, 0.1, true};
  c.dt = 1e-4;
  c.s_list = {0.5, 1.0};
  c.output_dir = dir.string();
  c.output_prefix = "run";
  return c;
}

} // namespace

TEST(Config, RoundTrip) {
  ExperimentConfig c;
  c.datum.resonant = false;
  c.datum.theta = 0.3;
  c.datum.m = 2;
  c.datum.p = {0.1, -0.4};
  c.datum.a = {0.25, 0.5};
  c.datum.c = {-1.0, 0.125};
  c.engine = Engine::explicit_formula;
  c.truncation = 64;
  c.time_grid = {0.5, 3.0, 0.25, false};
  c.dt = 2.5e-4;
  c.s_list = {0.0, 1.5};
  c.output_dir = "x/y";
  c.output_prefix = "pre";
  c.tolerances = {{"T", 1e-9}, {"mass", 1e-11}};
  c.seed = 77;
  const json j = to_json(c);
  const ExperimentConfig back = config_from_json(json::parse(j.dump()));
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(back.datum.a, c.datum.a);
  EXPECT_EQ(back.tolerance("T", 0.0), 1e-9);
  EXPECT_EQ(back.tolerance("missing", 4.0), 4.0);
}

TEST(Config, Rejections) {
  EXPECT_THROW(engine_from_string("rk45"), ConfigError);
  EXPECT_THROW(config_from_json(json::parse(R"({"datum": {"p": 0.5}})")), ConfigError);
  EXPECT_THROW(config_from_json(json::parse(R"({"datum": {"resonant": true, "p": {"re": 0.5}}})")),
               ConfigError);
  EXPECT_THROW(config_from_json(json::parse(R"({"datum": {"resonant": true, "p": 0.5}, "dt": 0})")),
               ConfigError);
  EXPECT_THROW(config_from_json(json::parse("[1, 2]")), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
  ExperimentConfig c;
  c.datum.resonant = false;
  c.datum.a = 1.0;
  c.datum.c = 1.0;
  EXPECT_THROW(build_datum(c), ConfigError);
}

TEST(Config, OutputTimes) {
  ExperimentConfig c;
  c.time_grid = {0.0, 0.5, 0.25, true};
  const auto t = output_times(c, make_resonant(0.0, 0, 0.5));
  ASSERT_EQ(t.size(), 3u);
  EXPECT_NEAR(t[2], 0.5 * blowup_time(0.5), 1e-15);
  c.time_grid = {1.0, 0.5, 0.1, false};
  EXPECT_THROW(output_times(c, make_resonant(0.0, 0, 0.5)), ConfigError);
}

TEST(Report, CheckRecordSemantics) {
  EXPECT_TRUE(CheckRecord::near("x", 1.0, 1.0 + 1e-9, 1e-8).pass);
  EXPECT_FALSE(CheckRecord::near("x", 1.0, 1.1, 1e-8).pass);
  EXPECT_FALSE(CheckRecord::near("x", 1.0, NAN, 1.0).pass);
  EXPECT_TRUE(CheckRecord::at_most("x", 1.0, 0.5).pass);
  EXPECT_FALSE(CheckRecord::at_least("x", 1.0, 0.5).pass);
  EXPECT_FALSE(CheckRecord::failure("x", "why").pass);
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
}

TEST(Simulate, AllEnginesWriteFiles) {
  const fs::path dir = scratch_dir("all");
  const ExperimentConfig c = small_config(dir);
  std::ostringstream log;
  ASSERT_EQ(cmd_simulate(c, log), exit_ok) << log.str();
  for (const char *f : {"run_closed_form.csv", "run_explicit.csv", "run_oracle.csv", "run_diff.json"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  const std::string csv = slurp(dir / "run_closed_form.csv");
  EXPECT_EQ(csv.substr(0, 2), "t,");
  const json diff = json::parse(slurp(dir / "run_diff.json"));
  EXPECT_LE(diff.at("closed_form_vs_explicit").get<double>(), 1e-8);
  EXPECT_LE(diff.at("oracle_vs_closed_form").get<double>(), 1e-6);
}

TEST(Simulate, Deterministic) {
  const fs::path d1 = scratch_dir("det1"), d2 = scratch_dir("det2");
  ExperimentConfig c = small_config(d1);
  ASSERT_EQ(cmd_simulate(c), exit_ok);
  c.output_dir = d2.string();
  ASSERT_EQ(cmd_simulate(c), exit_ok);
  for (const char *f : {"run_closed_form.csv", "run_explicit.csv", "run_oracle.csv", "run_diff.json"})
    EXPECT_EQ(slurp(d1 / f), slurp(d2 / f)) << f;
}

TEST(Simulate, ExitCodes) {
  const fs::path dir = scratch_dir("codes");
  ExperimentConfig c = small_config(dir);
  c.engine = Engine::closed_form;
  c.datum.resonant = false;
  c.datum.a = 2.0 / 3.0;
  c.datum.c = 1.0;
  std::ostringstream log;
  EXPECT_EQ(cmd_simulate(c, log), exit_config);
  EXPECT_NE(log.str().find("2a + c"), std::string::npos);

  c = small_config(dir);
  c.time_grid = {0.0, 1.0, 0.5, true};
  c.engine = Engine::closed_form;
  EXPECT_EQ(cmd_simulate(c, log), exit_config);

  c = small_config(dir);
  c.time_grid = {0.5, 0.1, 0.1, false};
  EXPECT_EQ(cmd_simulate(c, log), exit_config);

  c = small_config(dir);
  c.engine = Engine::oracle;
  c.dt = 0.1;
  c.time_grid = {0.0, 0.5, 0.5, true};
  EXPECT_EQ(cmd_simulate(c, log), exit_blowup);
}

TEST(Blowup, Reports) {
  const fs::path dir = scratch_dir("blowup");
  ExperimentConfig c = small_config(dir);
  c.s_list = {1.0};
  const json r5 = blowup_report(make_resonant(0.0, 0, 0.5), c);
  EXPECT_NEAR(r5["analytic"]["T"].get<double>(), 3.0 * pi / 8.0, 1e-15);
  EXPECT_NEAR(r5["analytic"]["c0"].get<double>(), 0.384, 1e-15);
  EXPECT_NEAR(r5["analytic"]["mass_defect"].get<double>(), 1.0, 1e-12);
  EXPECT_TRUE(r5["pass"].get<bool>()) << r5.dump(2);

  const json r8 = blowup_report(make_resonant(0.0, 0, 0.8), c);
  EXPECT_NEAR(r8["analytic"]["T"].get<double>(), 0.3534292, 1e-7);
  EXPECT_NEAR(r8["analytic"]["c0"].get<double>(), 4.0 * 0.64 * 0.36 / std::pow(1.64, 3), 1e-15);
  EXPECT_NEAR(r8["analytic"]["c0"].get<double>(), 0.2089349, 1e-7);
  EXPECT_TRUE(r8["pass"].get<bool>()) << r8.dump(2);

  const json r52 = blowup_report(make_resonant(0.0, 2, 0.5), c);
  EXPECT_EQ(r52["analytic"]["T"], r5["analytic"]["T"]);
  EXPECT_EQ(r52["analytic"]["c0"], r5["analytic"]["c0"]);
  EXPECT_NEAR(r52["analytic"]["mass_defect"].get<double>(), 1.0, 1e-12);
  EXPECT_TRUE(r52["pass"].get<bool>()) << r52.dump(2);

  c.datum.resonant = false;
  c.datum.a = 2.0 / 3.0;
  c.datum.c = 1.0;
  std::ostringstream out, log;
  EXPECT_EQ(cmd_blowup(c, out, log), exit_config);
}

TEST(Stability, Reports) {
  const fs::path dir = scratch_dir("stability");
  ExperimentConfig c = small_config(dir);
  c.truncation = 128;
  const json res = stability_report(make_resonant(0.0, 0, 0.5), c);
  EXPECT_EQ(res["classification"], "resonant");
  EXPECT_NEAR(res["resonance_times"][0].get<double>(), 3.0 * pi / 8.0, 1e-15);
  EXPECT_NEAR(res["radius_at_first_time"].get<double>(), 1.0, 1e-10);

  const json non = stability_report(make_finite_gap(0.0, 0, 0.5, 2.0 / 3.0, 1.0), c);
  EXPECT_EQ(non["classification"], "non_resonant");
  EXPECT_LT(non["q0"].get<double>(), 1.0);
  EXPECT_NEAR(non["min_abs_x"].get<double>(), 1.0, 1e-9);
  EXPECT_LE(non["iterates"]["s"].back().get<double>(), 1e-6);

  std::ostringstream out;
  EXPECT_EQ(cmd_stability(c, 8, out), exit_ok);
  const json rep = json::parse(slurp(dir / "run_stability.json"));
  EXPECT_EQ(rep["sweep"]["misclassifications"].get<int>(), 0);
  EXPECT_EQ(rep["sweep"]["rows"].size(), 8u);
}

TEST(Dichotomy, SamplesAreValid) {
  DichotomyOptions opt;
  const auto data = sample_data(5, opt);
  ASSERT_EQ(data.size(), opt.samples);
  std::size_t resonant = 0;
  for (const auto &d : data) {
    EXPECT_LE(d.constraint_residual(), 1e-12);
    EXPECT_GE(d.rho, opt.rho_min);
    EXPECT_LE(d.rho, opt.rho_max);
    resonant += classify(d) == Resonance::resonant ? 1 : 0;
  }
  EXPECT_GT(resonant, 0u);
  EXPECT_LT(resonant, opt.samples);
}
