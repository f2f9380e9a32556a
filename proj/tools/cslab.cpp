#include <iostream>

#include <CLI11.hpp>

#include "cslab/app/commands.hpp"

int main(int argc, char **argv) {
  using namespace cslab::app;
  CLI::App app{"cslab: finite-gap solutions of i u_t = -u_xx - 2 (D Pi |u|^2) u "
               "on Hardy modes"};
  app.require_subcommand(1);

  std::string config_path;
  auto *simulate = app.add_subcommand("simulate", "write trajectories for each engine");
  simulate->add_option("--config", config_path, "experiment JSON")->required();

  auto *blowup = app.add_subcommand("blowup", "blow-up report for resonant data");
  blowup->add_option("--config", config_path, "experiment JSON")->required();

  std::size_t sweep = 0;
  auto *stability = app.add_subcommand("stability", "resonance dichotomy report");
  stability->add_option("--config", config_path, "experiment JSON")->required();
  stability->add_option("--sweep", sweep, "also run a random sweep of this many data");

  AcceptanceOptions verify_opt;
  std::string report_path;
  auto *verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_flag("--fast", verify_opt.fast, "skip the slow oracle and long-time checks");
  verify->add_option("--truncation", verify_opt.cross_truncation,
                     "truncation for the cross-engine checks");
  verify->add_option("--dt", verify_opt.oracle_dt, "time step of the PDE oracle");
  verify->add_option("--report", report_path, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (*verify)
      return cmd_verify(verify_opt, report_path);
    const ExperimentConfig config = load_config(config_path);
    if (*simulate)
      return cmd_simulate(config);
    if (*blowup)
      return cmd_blowup(config);
    return cmd_stability(config, sweep);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  }
}
