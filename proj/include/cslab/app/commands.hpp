#pragma once

// The four CLI commands. Each returns the process exit code:
// 0 success, 1 configuration error, 2 blow-up suspected, 3 verification failed.

#include <filesystem>
#include <iostream>

#include "cslab/app/acceptance.hpp"
#include "cslab/app/config.hpp"

namespace cslab::app {

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_blowup = 2, exit_verify = 3 };

namespace detail {

inline std::filesystem::path output_path(const ExperimentConfig &c, const std::string &suffix) {
  std::filesystem::create_directories(c.output_dir);
  return std::filesystem::path(c.output_dir) / (c.output_prefix + "_" + suffix);
}

inline std::vector<std::string> norm_columns(const ExperimentConfig &c) {
  std::vector<std::string> cols;
  for (double s : c.s_list)
    cols.push_back("H" + format_number(s));
  return cols;
}

struct EngineRun {
  std::vector<double> times;
  std::vector<HardyCoeffs> states;
};

inline EngineRun run_closed_form(const ExperimentConfig &c, const FiniteGapData &d,
                                 const std::vector<double> &times) {
  std::vector<std::string> cols{"t", "abs_alpha1", "abs_alpha2", "re_B1", "im_B1",
                                "re_B2", "im_B2"};
  for (auto &h : norm_columns(c))
    cols.push_back(h);
  cols.push_back("I0");
  CsvWriter csv(output_path(c, "closed_form.csv"), cols);
  EngineRun run{times, {}};
  run.states.reserve(times.size());
  for (double t : times) {
    const PoleState ps = pole_state(d, t);
    const HardyCoeffs u = solution_coeffs(d, t, c.truncation);
    run.states.push_back(u);
    std::vector<double> row{t, std::abs(ps.alpha1), std::abs(ps.alpha2)};
    for (cplx b : {ps.B1, ps.B2}) {
      row.push_back(ps.has_residues ? b.real() : NAN);
      row.push_back(ps.has_residues ? b.imag() : NAN);
    }
    for (double s : c.s_list)
      row.push_back(t > 0.0 ? hs_norm_closed(d, t, s) : hs_norm(solution_coeffs(d, 0.0), s));
    row.push_back(initial_mass_resonant(d.p));
    csv.row(row);
  }
  return run;
}

inline EngineRun run_explicit(const ExperimentConfig &c, const HardyCoeffs &u0,
                              const std::vector<double> &times) {
  std::vector<std::string> cols{"t"};
  for (auto &h : norm_columns(c))
    cols.push_back(h);
  cols.push_back("I0");
  cols.push_back("tail_bound");
  CsvWriter csv(output_path(c, "explicit.csv"), cols);
  const ExplicitFormulaEngine engine(u0);
  const CoefficientSweep sweep(engine);
  EngineRun run{times, std::vector<HardyCoeffs>(times.size(), u0)};
  parallel_for(times.size(), [&](std::size_t i) { run.states[i] = sweep.coeffs(times[i]); });
  for (std::size_t i = 0; i < times.size(); ++i) {
    const HardyCoeffs &u = run.states[i];
    std::vector<double> row{times[i]};
    for (double s : c.s_list)
      row.push_back(hs_norm(u, s));
    row.push_back(u.values().squaredNorm());
    // Mass not captured by modes 0..N: ||u0||^2 - ||u(t)||^2 >= 0 up to rounding.
    row.push_back(std::sqrt(std::max(0.0, u0.values().squaredNorm() - u.values().squaredNorm())));
    csv.row(row);
  }
  return run;
}

inline EngineRun run_oracle(const ExperimentConfig &c, const HardyCoeffs &u0,
                            const std::vector<double> &times) {
  OracleOptions opt;
  opt.dt = c.dt;
  opt.mass_drift_limit = c.tolerance("oracle_mass_drift", opt.mass_drift_limit);
  const Trajectory traj = evolve_to_times(u0, times, opt);
  std::vector<std::string> cols{"t"};
  for (auto &h : norm_columns(c))
    cols.push_back(h);
  for (const char *name : {"I0", "I1", "I2"})
    cols.push_back(name);
  CsvWriter csv(output_path(c, "oracle.csv"), cols);
  EngineRun run;
  // evolve_to_times always records t = 0 first; keep only the requested times.
  const std::size_t skip = (times.empty() || times.front() > 0.0) ? 1 : 0;
  for (std::size_t i = skip; i < traj.times.size(); ++i) {
    std::vector<double> row{traj.times[i]};
    for (double s : c.s_list)
      row.push_back(hs_norm(traj.states[i], s));
    for (double q : traj.conserved[i])
      row.push_back(q);
    csv.row(row);
    run.times.push_back(traj.times[i]);
    run.states.push_back(traj.states[i]);
  }
  return run;
}

inline double max_relative_diff(const EngineRun &a, const EngineRun &b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(a.states.size(), b.states.size()); ++i) {
    const CVector &x = a.states[i].values();
    const CVector &y = b.states[i].values();
    const Eigen::Index n = std::min(x.size(), y.size());
    worst = std::max(worst, (x.head(n) - y.head(n)).norm() / y.head(n).norm());
  }
  return worst;
}

} // namespace detail

inline int cmd_simulate(const ExperimentConfig &c, std::ostream &log = std::cerr) {
  try {
    const FiniteGapData d = build_datum(c);
    const std::vector<double> times = output_times(c, d);
    const bool want_cf = c.engine == Engine::closed_form || c.engine == Engine::all;
    if (want_cf) {
      if (classify(d) != Resonance::resonant)
        throw ConfigError("engine closed_form needs resonant data (2a + c = 0); "
                          "this datum has |2a + c| = " +
                          format_number(std::abs(2.0 * d.a + d.c)));
      if (!(times.back() < blowup_time(d.p)))
        throw ConfigError("engine closed_form needs t_end < T = " +
                          format_number(blowup_time(d.p)));
    }
    const HardyCoeffs u0 = synthesize_coeffs(d, c.truncation);
    std::optional<detail::EngineRun> cf, ef, oracle;
    if (want_cf)
      cf = detail::run_closed_form(c, d, times);
    if (c.engine == Engine::explicit_formula || c.engine == Engine::all)
      ef = detail::run_explicit(c, u0, times);
    if (c.engine == Engine::oracle || c.engine == Engine::all)
      oracle = detail::run_oracle(c, u0, times);
    if (c.engine == Engine::all) {
      const json summary{
          {"closed_form_vs_explicit", detail::max_relative_diff(*ef, *cf)},
          {"oracle_vs_closed_form", detail::max_relative_diff(*oracle, *cf)},
          {"oracle_vs_explicit", detail::max_relative_diff(*oracle, *ef)},
          {"metric", "max over output times of relative L2 difference"},
          {"truncation", c.truncation},
          {"dt", c.dt}};
      write_json(detail::output_path(c, "diff.json"), summary);
    }
    return exit_ok;
  } catch (const ConfigError &e) {
    log << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const PreconditionError &e) {
    log << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const BlowupSuspected &e) {
    log << "blow-up suspected at t = " << format_number(e.time()) << ": " << e.what() << '\n';
    return exit_blowup;
  }
}

/// Analytic blow-up quantities next to their measured counterparts.
inline json blowup_report(const FiniteGapData &d, const ExperimentConfig &c) {
  const double T = blowup_time(d.p);
  const double c0 = pole_constant(d.p);
  const double defect = initial_mass_resonant(d.p) - limit_profile(d).mass();
  json checks = json::array();
  auto add = [&](const CheckRecord &r) { checks.push_back(to_json(r)); };

  const CoreDynamics dyn(d);
  const auto hit = first_unimodular_time(dyn, std::max(10.0, 2.0 * T));
  add(hit ? CheckRecord::near("T from spectral radius", T, *hit, c.tolerance("T", 1e-8))
          : CheckRecord::failure("T from spectral radius", "radius never reached 1"));

  json fits = json::array();
  for (double gap : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const auto [g, b] = pole_asymptotics(d, T - gap);
    json row{{"T_minus_t", gap}, {"alpha_ratio", g}, {"beta_ratio", b}};
    json rates;
    for (double s : c.s_list)
      rates[format_number(s)] = hs_norm_closed(d, T - gap, s) * std::pow(gap, 2.0 * s);
    row["hs_rate"] = rates;
    fits.push_back(row);
  }
  const auto [g3, b3] = pole_asymptotics(d, T - 1e-3);
  const double pole_tol = c.tolerance("pole_relative", 0.01);
  add(CheckRecord::near("(1-|alpha|^2)/(T-t)^2 at T-t=1e-3", c0, g3, pole_tol * c0));
  add(CheckRecord::near("|beta|^2/(T-t)^2 at T-t=1e-3", c0, b3, pole_tol * c0));
  json rate_constants;
  for (double s : c.s_list) {
    const double k = hs_rate_constant(d.p, s);
    rate_constants[format_number(s)] = k;
    if (s > 0.0) {
      const double measured = hs_norm_closed(d, T - 1e-3, s) * std::pow(1e-3, 2.0 * s);
      add(CheckRecord::near("H^s rate s=" + format_number(s) + " at T-t=1e-3", k, measured,
                            c.tolerance("rate_relative", 0.02) * k));
    }
  }
  const int N = 1024;
  const double measured_defect = synthesize_coeffs(d, N).values().squaredNorm() -
                                 limit_profile(d).coeffs(N).values().squaredNorm();
  add(CheckRecord::near("mass defect", defect, measured_defect, c.tolerance("mass", 1e-12)));

  bool pass = true;
  for (const auto &chk : checks)
    pass = pass && chk.at("pass").get<bool>();
  return json{{"datum", {{"p", complex_to_json(d.p)}, {"m", d.m}}},
              {"analytic",
               {{"T", T},
                {"c0", c0},
                {"mass_initial", initial_mass_resonant(d.p)},
                {"mass_limit", limit_profile(d).mass()},
                {"mass_defect", defect},
                {"rate_constants", rate_constants}}},
              {"measured", fits},
              {"checks", checks},
              {"pass", pass}};
}

inline int cmd_blowup(const ExperimentConfig &c, std::ostream &out = std::cout,
                      std::ostream &log = std::cerr) {
  try {
    const FiniteGapData d = build_datum(c);
    if (classify(d) != Resonance::resonant)
      throw ConfigError("blowup needs resonant data (2a + c = 0)");
    const json report = blowup_report(d, c);
    write_json(detail::output_path(c, "blowup.json"), report);
    out << report.dump(2) << '\n';
    return exit_ok;
  } catch (const ConfigError &e) {
    log << "config error: " << e.what() << '\n';
    return exit_config;
  }
}

inline json stability_report(const FiniteGapData &d, const ExperimentConfig &c) {
  const SpectralData spec = block_eigen(d);
  const CoreDynamics dyn(d);
  const double horizon = c.tolerance("scan_horizon", 20.0);
  const RadiusScan scan = scan_spectral_radius(dyn, horizon, 0.01);
  json j{{"classification", to_string(spec.classification)},
         {"block",
          {{"lambda_plus", spec.lambda_plus},
           {"lambda_minus", spec.lambda_minus},
           {"beta", spec.beta},
           {"kappa", spec.kappa},
           {"b_plus", spec.b_plus},
           {"b_minus", spec.b_minus},
           {"delta", spec.delta}}},
         {"min_abs_x", min_abs_x(spec, 2.0 * horizon, 1e-3)},
         {"scan", {{"horizon", horizon}, {"step", 0.01}, {"max_radius", scan.max_radius},
                   {"argmax", scan.argmax}}}};
  double iterate_time = scan.argmax;
  if (spec.classification == Resonance::resonant) {
    json times = json::array();
    for (int ell = 0; ell < 4; ++ell)
      times.push_back(0.5 * unimodular_time_tau(d, ell));
    j["resonance_times"] = times;
    const auto hit = first_unimodular_time(dyn, horizon);
    j["first_unimodular_time"] = hit ? json(*hit) : json(nullptr);
    if (hit) {
      j["radius_at_first_time"] = dyn.spectral_radius(*hit);
      iterate_time = *hit;
    }
  } else {
    j["q0"] = scan.max_radius;
  }
  const HardyCoeffs u0 = synthesize_coeffs(d, c.truncation);
  j["iterates"] = {{"t", iterate_time},
                   {"s", stability_iterate_decay(u0, build_lax_matrix(u0), iterate_time, 200)}};
  return j;
}

inline int cmd_stability(const ExperimentConfig &c, std::size_t sweep_samples = 0,
                         std::ostream &out = std::cout, std::ostream &log = std::cerr) {
  try {
    const FiniteGapData d = build_datum(c);
    json report = stability_report(d, c);
    if (sweep_samples > 0) {
      DichotomyOptions opt;
      opt.samples = sweep_samples;
      const auto rows = dichotomy_sweep(c.seed, opt);
      json table = json::array();
      std::size_t wrong = 0;
      for (const auto &row : rows) {
        const bool ok = row.consistent(opt);
        wrong += ok ? 0 : 1;
        table.push_back({{"p", complex_to_json(row.data.p)},
                         {"a", complex_to_json(row.data.effective_a())},
                         {"c", complex_to_json(row.data.effective_c())},
                         {"classification", to_string(row.classification)},
                         {"min_abs_x", row.min_abs_x},
                         {"max_radius", row.max_radius},
                         {"radius_hits_one", row.radius_hits_one()},
                         {"iterate_time", row.iterate_time},
                         {"s_final", row.final_iterate},
                         {"consistent", ok}});
      }
      report["sweep"] = {{"seed", c.seed}, {"rows", table}, {"misclassifications", wrong}};
    }
    write_json(detail::output_path(c, "stability.json"), report);
    out << report.dump(2) << '\n';
    return exit_ok;
  } catch (const ConfigError &e) {
    log << "config error: " << e.what() << '\n';
    return exit_config;
  }
}

inline int cmd_verify(const AcceptanceOptions &opt, const std::string &report_path,
                      std::ostream &out = std::cout) {
  const auto results = run_acceptance(opt);
  print_summary(out, results);
  const VerificationReport rep = to_report(results, opt);
  if (!report_path.empty())
    write_json(report_path, to_json(rep));
  return rep.all_pass() ? exit_ok : exit_verify;
}

} // namespace cslab::app
