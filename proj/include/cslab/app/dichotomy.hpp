#pragma once

// Random sweep over valid (p, a, c) checking that the three characterisations
// of resonance agree sample by sample.

#include <random>
#include <vector>

#include "cslab/closed_form.hpp"
#include "cslab/lax.hpp"
#include "cslab/parallel.hpp"

namespace cslab::app {

struct DichotomyOptions {
  std::size_t samples = 120;
  double resonant_fraction = 0.3;
  double rho_min = 0.2;
  double rho_max = 0.5;
  double ratio_max = 3.0;
  double ratio_floor_margin = 0.05; // keep a/c above -1/(1-r) + margin
  double resonance_gap = 0.4;       // |a/c + 1/2| >= gap for non-resonant samples
  double scan_horizon = 20.0;       // physical time
  double scan_step = 0.01;
  double tau_horizon = 40.0;
  double tau_step = 1e-3;
  double zero_threshold = 1e-8;
  int iterate_count = 200;
  double decay_threshold = 1e-6;
  int truncation = 128;
};

/// A valid datum with real ratio k = a/c: |c|^2 (k + 1/(1-r)) = 2.
inline FiniteGapData datum_from_ratio(cplx p, double k, double phase) {
  const double r = std::norm(p);
  const double c_mod = std::sqrt(2.0 / (k + 1.0 / (1.0 - r)));
  const cplx c = std::polar(c_mod, phase);
  return make_finite_gap(0.0, 0, p, k * c, c);
}

inline std::vector<FiniteGapData> sample_data(std::uint64_t seed,
                                              const DichotomyOptions &opt) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<FiniteGapData> out;
  out.reserve(opt.samples);
  for (std::size_t i = 0; i < opt.samples; ++i) {
    const double rho = opt.rho_min + (opt.rho_max - opt.rho_min) * unit(rng);
    const cplx p = std::polar(rho, 2.0 * pi * unit(rng));
    const double phase = 2.0 * pi * unit(rng);
    if (unit(rng) < opt.resonant_fraction) {
      out.push_back(make_resonant(phase, 0, p));
      continue;
    }
    const double k_min = -1.0 / (1.0 - rho * rho) + opt.ratio_floor_margin;
    double k = 0.0;
    do {
      k = k_min + (opt.ratio_max - k_min) * unit(rng);
    } while (std::abs(k + 0.5) < opt.resonance_gap);
    out.push_back(datum_from_ratio(p, k, phase));
  }
  return out;
}

struct DichotomyRow {
  FiniteGapData data;
  Resonance classification = Resonance::non_resonant;
  double min_abs_x = 0.0;
  double delta = 0.0;
  double max_radius = 0.0;         // q0 over the scan
  double argmax = 0.0;
  std::optional<double> unimodular; // first time the radius reaches one
  double iterate_time = 0.0;
  double final_iterate = 0.0;       // s_n at n = iterate_count

  bool radius_hits_one() const { return unimodular.has_value(); }
  bool x_vanishes(double threshold) const { return min_abs_x <= threshold; }

  /// Resonant <=> radius hits 1 <=> min |x| ~ 0; non-resonant <=> q0 < 1 and
  /// the iterates decay.
  bool consistent(const DichotomyOptions &opt) const {
    if (classification == Resonance::resonant)
      return radius_hits_one() && x_vanishes(opt.zero_threshold);
    return !radius_hits_one() && !x_vanishes(opt.zero_threshold) &&
           max_radius < 1.0 && final_iterate < opt.decay_threshold;
  }
};

inline DichotomyRow evaluate_sample(const FiniteGapData &d,
                                    const DichotomyOptions &opt) {
  DichotomyRow row;
  row.data = d;
  row.classification = classify(d);
  const SpectralData spec = block_eigen(d);
  row.delta = spec.delta;
  row.min_abs_x = min_abs_x(spec, opt.tau_horizon, opt.tau_step);
  const CoreDynamics dyn(d);
  const RadiusScan scan = scan_spectral_radius(dyn, opt.scan_horizon, opt.scan_step);
  row.max_radius = scan.max_radius;
  row.argmax = scan.argmax;
  row.unimodular = first_unimodular_time(dyn, opt.scan_horizon, 1e-3, opt.zero_threshold);
  // Iterates at the worst time of the scan, or at the unimodular time.
  row.iterate_time = row.unimodular.value_or(scan.argmax);
  const HardyCoeffs u0 = synthesize_coeffs(d, opt.truncation);
  const auto decay = stability_iterate_decay(u0, build_lax_matrix(u0),
                                             row.iterate_time, opt.iterate_count);
  row.final_iterate = decay.back();
  return row;
}

inline std::vector<DichotomyRow> dichotomy_sweep(std::uint64_t seed,
                                                 const DichotomyOptions &opt) {
  const auto data = sample_data(seed, opt);
  std::vector<DichotomyRow> rows(data.size());
  parallel_for(data.size(), [&](std::size_t i) { rows[i] = evaluate_sample(data[i], opt); });
  return rows;
}

} // namespace cslab::app
