#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cslab/errors.hpp"

namespace cslab::app {

inline constexpr const char *version = "0.1.0";

/// One numeric check: pass iff |expected - measured| <= tolerance, unless a
/// custom comparison was already decided (bound checks).
struct CheckRecord {
  std::string name;
  double expected = 0.0;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;

  static CheckRecord near(std::string name, double expected, double measured,
                          double tolerance, std::string note = {}) {
    const bool ok = std::isfinite(measured) &&
                    std::abs(expected - measured) <= tolerance;
    return {std::move(name), expected, measured, tolerance, ok, std::move(note)};
  }
  /// measured <= bound.
  static CheckRecord at_most(std::string name, double bound, double measured,
                             std::string note = {}) {
    const bool ok = std::isfinite(measured) && measured <= bound;
    return {std::move(name), bound, measured, 0.0, ok, std::move(note)};
  }
  /// measured >= bound.
  static CheckRecord at_least(std::string name, double bound, double measured,
                              std::string note = {}) {
    const bool ok = std::isfinite(measured) && measured >= bound;
    return {std::move(name), bound, measured, 0.0, ok, std::move(note)};
  }
  static CheckRecord failure(std::string name, std::string note) {
    return {std::move(name), NAN, NAN, 0.0, false, std::move(note)};
  }
};

inline nlohmann::json to_json(const CheckRecord &c) {
  auto num = [](double x) -> nlohmann::json {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
  };
  nlohmann::json j{{"name", c.name},
                   {"expected", num(c.expected)},
                   {"measured", num(c.measured)},
                   {"tolerance", num(c.tolerance)},
                   {"pass", c.pass}};
  if (!c.note.empty())
    j["note"] = c.note;
  return j;
}

struct VerificationReport {
  std::vector<CheckRecord> checks;
  int truncation = 0;
  double dt = 0.0;

  bool all_pass() const {
    for (const auto &c : checks)
      if (!c.pass)
        return false;
    return true;
  }
};

inline nlohmann::json to_json(const VerificationReport &r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto &c : r.checks)
    checks.push_back(to_json(c));
  return {{"environment", {{"N", r.truncation}, {"dt", r.dt}, {"version", version}}},
          {"checks", checks},
          {"pass", r.all_pass()}};
}

/// Fixed 17-significant-digit formatting, so that reruns are byte-identical.
inline std::string format_number(double x) {
  if (std::isnan(x))
    return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// CSV writer; the first column is always t.
class CsvWriter {
public:
  CsvWriter(const std::filesystem::path &path, std::vector<std::string> columns)
      : out_(path), width_(columns.size()) {
    if (!out_)
      throw Error("cannot open " + path.string() + " for writing");
    for (std::size_t i = 0; i < columns.size(); ++i)
      out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
  }

  void row(const std::vector<double> &values) {
    if (values.size() != width_)
      throw Error("CsvWriter: row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
      out_ << (i ? "," : "") << format_number(values[i]);
    out_ << '\n';
  }

private:
  std::ofstream out_;
  std::size_t width_;
};

inline void write_json(const std::filesystem::path &path, const nlohmann::json &j) {
  std::ofstream out(path);
  if (!out)
    throw Error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

} // namespace cslab::app
