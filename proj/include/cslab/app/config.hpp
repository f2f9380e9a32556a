#pragma once

// Experiment configuration (JSON) shared by the CLI commands.
//
// {
//   "datum": {"resonant": true, "theta": 0, "m": 0, "p": {"re": 0.5, "im": 0}},
//   "engine": "all",
//   "truncation": 128,
//   "time_grid": {"t_start": 0, "t_end": 0.5, "stride": 0.05,
//                 "relative_to_blowup": true},
//   "dt": 1e-4,
//   "s_list": [0.5, 1, 2],
//   "output": {"dir": "out", "prefix": "run"},
//   "tolerances": {"cross_engine": 1e-6},
//   "seed": 12345
// }
//
// A general datum gives "a" and "c" instead of "resonant". With
// relative_to_blowup the grid is in units of the blow-up time T.

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cslab/closed_form.hpp"

namespace cslab::app {

using nlohmann::json;

/// Raised for any malformed or inconsistent configuration (exit code 1).
class ConfigError : public Error {
public:
  using Error::Error;
};

enum class Engine { closed_form, explicit_formula, oracle, all };

inline const char *to_string(Engine e) {
  switch (e) {
  case Engine::closed_form:
    return "closed_form";
  case Engine::explicit_formula:
    return "explicit";
  case Engine::oracle:
    return "oracle";
  case Engine::all:
    return "all";
  }
  return "?";
}

inline Engine engine_from_string(const std::string &s) {
  if (s == "closed_form")
    return Engine::closed_form;
  if (s == "explicit")
    return Engine::explicit_formula;
  if (s == "oracle")
    return Engine::oracle;
  if (s == "all")
    return Engine::all;
  throw ConfigError("unknown engine '" + s +
                    "' (expected closed_form, explicit, oracle or all)");
}

struct DatumSpec {
  bool resonant = true;
  double theta = 0.0;
  int m = 0;
  cplx p{0.5, 0.0};
  cplx a;
  cplx c;

  FiniteGapData build() const {
    return resonant ? make_resonant(theta, m, p) : make_finite_gap(theta, m, p, a, c);
  }
};

struct TimeGrid {
  double t_start = 0.0;
  double t_end = 0.5;
  double stride = 0.05;
  bool relative_to_blowup = false;
};

struct ExperimentConfig {
  DatumSpec datum;
  Engine engine = Engine::all;
  int truncation = 128;
  TimeGrid time_grid;
  double dt = 1e-4;
  std::vector<double> s_list{1.0};
  std::string output_dir = ".";
  std::string output_prefix = "cslab";
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 12345;

  double tolerance(const std::string &key, double fallback) const {
    const auto it = tolerances.find(key);
    return it == tolerances.end() ? fallback : it->second;
  }
};

inline json complex_to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline cplx complex_from_json(const json &j, const char *what) {
  if (j.is_number())
    return {j.get<double>(), 0.0};
  if (!j.is_object() || !j.contains("re") || !j.contains("im"))
    throw ConfigError(std::string(what) + ": expected {\"re\": x, \"im\": y}");
  return {j.at("re").get<double>(), j.at("im").get<double>()};
}

inline json to_json(const ExperimentConfig &c) {
  json datum;
  datum["theta"] = c.datum.theta;
  datum["m"] = c.datum.m;
  datum["p"] = complex_to_json(c.datum.p);
  if (c.datum.resonant) {
    datum["resonant"] = true;
  } else {
    datum["a"] = complex_to_json(c.datum.a);
    datum["c"] = complex_to_json(c.datum.c);
  }
  return json{
      {"datum", datum},
      {"engine", to_string(c.engine)},
      {"truncation", c.truncation},
      {"time_grid",
       {{"t_start", c.time_grid.t_start},
        {"t_end", c.time_grid.t_end},
        {"stride", c.time_grid.stride},
        {"relative_to_blowup", c.time_grid.relative_to_blowup}}},
      {"dt", c.dt},
      {"s_list", c.s_list},
      {"output", {{"dir", c.output_dir}, {"prefix", c.output_prefix}}},
      {"tolerances", c.tolerances},
      {"seed", c.seed}};
}

inline ExperimentConfig config_from_json(const json &j) {
  try {
    if (!j.is_object())
      throw ConfigError("config must be a JSON object");
    ExperimentConfig c;
    const json &d = j.at("datum");
    c.datum.theta = d.value("theta", 0.0);
    c.datum.m = d.value("m", 0);
    c.datum.p = complex_from_json(d.at("p"), "datum.p");
    c.datum.resonant = d.value("resonant", false);
    if (!c.datum.resonant) {
      if (!d.contains("a") || !d.contains("c"))
        throw ConfigError("datum: give \"resonant\": true or both \"a\" and \"c\"");
      c.datum.a = complex_from_json(d.at("a"), "datum.a");
      c.datum.c = complex_from_json(d.at("c"), "datum.c");
    }
    c.engine = engine_from_string(j.value("engine", std::string("all")));
    c.truncation = j.value("truncation", c.truncation);
    if (c.truncation < 2)
      throw ConfigError("truncation must be at least 2");
    if (j.contains("time_grid")) {
      const json &g = j.at("time_grid");
      c.time_grid.t_start = g.value("t_start", 0.0);
      c.time_grid.t_end = g.at("t_end").get<double>();
      c.time_grid.stride = g.at("stride").get<double>();
      c.time_grid.relative_to_blowup = g.value("relative_to_blowup", false);
    }
    c.dt = j.value("dt", c.dt);
    if (!(c.dt > 0.0))
      throw ConfigError("dt must be positive");
    if (j.contains("s_list"))
      c.s_list = j.at("s_list").get<std::vector<double>>();
    for (double s : c.s_list)
      if (!(s >= 0.0))
        throw ConfigError("s_list entries must be non-negative");
    if (j.contains("output")) {
      c.output_dir = j.at("output").value("dir", c.output_dir);
      c.output_prefix = j.at("output").value("prefix", c.output_prefix);
    }
    if (j.contains("tolerances"))
      c.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
    c.seed = j.value("seed", c.seed);
    return c;
  } catch (const json::exception &e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

inline ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception &e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return config_from_json(j);
}

/// The datum, with construction errors reported as configuration errors.
inline FiniteGapData build_datum(const ExperimentConfig &c) {
  try {
    return c.datum.build();
  } catch (const Error &e) {
    throw ConfigError(std::string("datum: ") + e.what());
  }
}

/// Physical output times t_start, t_start + stride, ..., up to t_end.
inline std::vector<double> output_times(const ExperimentConfig &c,
                                        const FiniteGapData &d) {
  const TimeGrid &g = c.time_grid;
  const double scale = g.relative_to_blowup ? blowup_time(d.p) : 1.0;
  if (!(g.stride > 0.0))
    throw ConfigError("time_grid.stride must be positive");
  if (!(g.t_start >= 0.0))
    throw ConfigError("time_grid.t_start must be non-negative");
  std::vector<double> times;
  for (long k = 0;; ++k) {
    const double t = g.t_start + double(k) * g.stride;
    if (t > g.t_end * (1.0 + 1e-12))
      break;
    times.push_back(std::min(t, g.t_end) * scale);
  }
  if (times.empty())
    throw ConfigError("time grid is empty (t_end < t_start)");
  return times;
}

} // namespace cslab::app
