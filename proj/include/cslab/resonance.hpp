#pragma once

// Resonance analysis of the core block.
//
// Lax time tau is used by x_of_tau and unimodular_time_tau; every other
// function takes the physical time t = tau / 2.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/math/tools/minima.hpp>

#include "cslab/finite_gap.hpp"
#include "cslab/lax.hpp"

namespace cslab {

inline constexpr double resonance_tolerance = 1e-12;

enum class Resonance { resonant, non_resonant };

inline const char *to_string(Resonance c) {
  return c == Resonance::resonant ? "resonant" : "non_resonant";
}

inline Resonance classify(const FiniteGapData &d) {
  return std::abs(2.0 * d.a + d.c) <= resonance_tolerance
             ? Resonance::resonant
             : Resonance::non_resonant;
}

/// Eigen-data of the core block: roots of lambda^2 - beta lambda - kappa and the
/// weights of x(tau) = b+ e^{-i lambda+ tau} + b- e^{-i lambda- tau}.
struct SpectralData {
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  double kappa = 0.0;
  double beta = 0.0;
  double b_plus = 0.0;
  double b_minus = 0.0;
  Resonance classification = Resonance::non_resonant;
  double delta = 0.0; // ||b+| - |b-||, a lower bound for |x(tau)|
};

inline SpectralData block_eigen(const FiniteGapData &d) {
  const CoreBlock blk = core_block_matrices(d);
  SpectralData s;
  s.beta = blk.beta;
  s.kappa = blk.kappa;
  const double disc = s.beta * s.beta + 4.0 * s.kappa;
  if (!(disc > 0.0))
    throw NumericalFailure("block_eigen: non-positive discriminant");
  const double root = std::sqrt(disc);
  if (s.beta >= 0.0) {
    s.lambda_plus = 0.5 * (s.beta + root);
    s.lambda_minus = -s.kappa / s.lambda_plus;
  } else {
    s.lambda_minus = 0.5 * (s.beta - root);
    s.lambda_plus = -s.kappa / s.lambda_minus;
  }
  const double gap = s.lambda_plus - s.lambda_minus;
  s.b_plus = (s.kappa - s.lambda_minus) / gap;
  s.b_minus = (s.lambda_plus - s.kappa) / gap;
  s.classification = classify(d);
  s.delta = s.classification == Resonance::resonant
                ? 0.0
                : std::abs(std::abs(s.b_plus) - std::abs(s.b_minus));
  return s;
}

/// e0-coordinate of e^{-i tau L} S* e1 (tau is Lax time).
inline cplx x_of_tau(const SpectralData &s, double tau) {
  return s.b_plus * std::polar(1.0, -s.lambda_plus * tau) +
         s.b_minus * std::polar(1.0, -s.lambda_minus * tau);
}

/// Lax times (2l+1) pi (1-r) / (2|p|) at which S* e1 is mapped onto C e1.
inline double unimodular_time_tau(const FiniteGapData &d, int ell) {
  if (classify(d) != Resonance::resonant)
    throw PreconditionError(
        "unimodular_time_tau: no unimodular eigenvalue unless 2a + c = 0");
  return (2.0 * ell + 1.0) * pi * (1.0 - d.r) / (2.0 * d.rho);
}

/// exp(-i tau L_block) through the spectral projectors of the 2x2 block.
inline Eigen::Matrix2cd exp_core_block(const CoreBlock &blk,
                                       const SpectralData &s, double tau) {
  const Eigen::Matrix2cd I = Eigen::Matrix2cd::Identity();
  const double gap = s.lambda_plus - s.lambda_minus;
  const Eigen::Matrix2cd P_plus = (blk.L_block - s.lambda_minus * I) / gap;
  const Eigen::Matrix2cd P_minus = (s.lambda_plus * I - blk.L_block) / gap;
  return std::polar(1.0, -tau * s.lambda_plus) * P_plus +
         std::polar(1.0, -tau * s.lambda_minus) * P_minus;
}

/// Sigma_t^* = e^{-it} e^{-2itL} S* on span(e0, e1, psi).
class CoreDynamics {
public:
  explicit CoreDynamics(const FiniteGapData &d)
      : data_(d), block_(core_block_matrices(d)), spec_(block_eigen(d)),
        gram_(core_gram(d.p)), sstar_psi_(sstar_psi_coords(d.p)) {}

  const FiniteGapData &data() const { return data_; }
  const CoreBlock &block() const { return block_; }
  const SpectralData &spectral() const { return spec_; }

  /// Upper-left 2x2 block, acting on K_psi.
  Eigen::Matrix2cd sigma_core(double t) const {
    return std::polar(1.0, -t) * exp_core_block(block_, spec_, 2.0 * t) *
           block_.Sstar_block;
  }

  Eigen::Matrix3cd sigma_block(double t) const {
    const Eigen::Matrix2cd E =
        std::polar(1.0, -t) * exp_core_block(block_, spec_, 2.0 * t);
    Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
    m.topLeftCorner<2, 2>() = E * block_.Sstar_block;
    m.topRightCorner<2, 1>() = E * sstar_psi_;
    return m;
  }

  double spectral_radius(double t) const {
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> solver(sigma_block(t), false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
  }

  /// For the dominant eigenvector g of the core block, |g(0)| / ||g||. Since
  /// e^{-2itL} is unitary, 1 - |lambda|^2 = |g(0)|^2 / ||g||^2, so this is
  /// zero exactly when the eigenvalue is unimodular, and it vanishes linearly.
  double unimodular_defect(double t) const {
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(sigma_core(t), true);
    Eigen::Index k = 0;
    solver.eigenvalues().cwiseAbs().maxCoeff(&k);
    const Eigen::Vector2cd g = solver.eigenvectors().col(k);
    const double norm2 = (g.adjoint() * gram_ * g)(0, 0).real();
    return std::abs(g[0]) / std::sqrt(norm2);
  }

private:
  FiniteGapData data_;
  CoreBlock block_;
  SpectralData spec_;
  Eigen::Matrix2cd gram_;
  Eigen::Vector2cd sstar_psi_;
};

inline Eigen::Matrix3cd sigma_block(const FiniteGapData &d, double t) {
  return CoreDynamics(d).sigma_block(t);
}

struct RadiusScan {
  std::vector<double> times;
  std::vector<double> radius;
  double max_radius = 0.0;
  double argmax = 0.0;
};

inline RadiusScan scan_spectral_radius(const CoreDynamics &dyn, double t_end,
                                       double step) {
  RadiusScan scan;
  const auto n = std::size_t(std::llround(t_end / step));
  scan.times.reserve(n + 1);
  scan.radius.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = double(i) * step;
    const double rad = dyn.spectral_radius(t);
    scan.times.push_back(t);
    scan.radius.push_back(rad);
    if (rad > scan.max_radius) {
      scan.max_radius = rad;
      scan.argmax = t;
    }
  }
  return scan;
}

namespace detail {
// Brent minimization of f on [lo, hi]; returns (argmin, min).
template <class F>
std::pair<double, double> refine_minimum(F f, double lo, double hi) {
  std::uintmax_t iters = 200;
  return boost::math::tools::brent_find_minima(f, lo, hi, 50, iters);
}

// Golden-section search to an absolute bracket width of `tol`, floored at a
// few ulps of the bracket. Used after Brent on V-shaped objectives, where
// Brent's parabolic steps stall near sqrt(eps).
template <class F>
std::pair<double, double> golden_section(F f, double lo, double hi, double tol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  tol = std::max(tol, 8.0 * std::numeric_limits<double>::epsilon() *
                          std::max(std::abs(lo), std::abs(hi)));
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}
} // namespace detail

/// Smallest physical time in [0, t_max] at which the spectral radius of the
/// core block reaches one, located by a grid scan of the unimodular defect and
/// a Brent plus golden-section refinement of its first local minimum. Returns
/// nullopt when no local minimum of the defect drops below `hit_tolerance`.
inline std::optional<double> first_unimodular_time(const CoreDynamics &dyn,
                                                   double t_max,
                                                   double step = 1e-3,
                                                   double hit_tolerance = 1e-8) {
  const auto n = std::size_t(std::llround(t_max / step));
  auto defect = [&](double t) { return dyn.unimodular_defect(t); };
  double prev2 = defect(0.0), prev1 = defect(step);
  for (std::size_t i = 2; i <= n; ++i) {
    const double cur = defect(double(i) * step);
    if (prev1 <= prev2 && prev1 <= cur) {
      const double lo = double(i - 2) * step, hi = double(i) * step;
      const double guess = detail::refine_minimum(defect, lo, hi).first;
      const double w = 1e-6 * std::max(1.0, guess);
      const auto [tmin, dmin] = detail::golden_section(
          defect, std::max(lo, guess - w), std::min(hi, guess + w), 1e-15);
      if (dmin <= hit_tolerance)
        return tmin;
    }
    prev2 = prev1;
    prev1 = cur;
  }
  return std::nullopt;
}

/// Minimum of |x(tau)| on [0, tau_max]: grid scan plus Brent and golden-section
/// refinement around every grid-local minimum.
inline double min_abs_x(const SpectralData &s, double tau_max, double step) {
  auto f = [&](double tau) { return std::abs(x_of_tau(s, tau)); };
  const auto n = std::size_t(std::llround(tau_max / step));
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    vals[i] = f(double(i) * step);
  double best = *std::min_element(vals.begin(), vals.end());
  for (std::size_t i = 1; i < n; ++i) {
    if (vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1]) {
      const double lo = double(i - 1) * step, hi = double(i + 1) * step;
      const double guess = detail::refine_minimum(f, lo, hi).first;
      const double w = 1e-6 * std::max(1.0, guess);
      const double fmin = detail::golden_section(f, std::max(lo, guess - w),
                                                 std::min(hi, guess + w), 1e-15)
                              .second;
      best = std::min(best, fmin);
    }
  }
  return best;
}

/// s_n = ||(e^{-it} e^{-2itL} S*)^n u0||, n = 0..n_max, on the truncated modes.
inline std::vector<double> stability_iterate_decay(const HardyCoeffs &u0,
                                                   const LaxEigensystem &eig,
                                                   double t, int n_max) {
  const Propagator U = propagator(eig, t);
  const Eigen::Index size = U.matrix.rows();
  // (U S*)(:, k) = U(:, k-1).
  CMatrix sigma = CMatrix::Zero(size, size);
  sigma.rightCols(size - 1) = std::polar(1.0, -t) * U.matrix.leftCols(size - 1);
  std::vector<double> out;
  out.reserve(std::size_t(n_max) + 1);
  CVector v = u0.values();
  out.push_back(v.norm());
  for (int n = 1; n <= n_max; ++n) {
    v = sigma * v;
    out.push_back(v.norm());
  }
  return out;
}

inline std::vector<double> stability_iterate_decay(const HardyCoeffs &u0,
                                                   const LaxMatrix &L, double t,
                                                   int n_max) {
  return stability_iterate_decay(u0, LaxEigensystem(L), t, n_max);
}

} // namespace cslab
