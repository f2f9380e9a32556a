#pragma once

// The rational finite-gap family
//
//   u0(z) = e^{i theta} z^m beta_p(z) (a + c / (1 - conj(p) z)),
//   beta_p(z) = (z - p) / (1 - conj(p) z),
//
// subject to a conj(c) + |c|^2 / (1 - |p|^2) = 2, and the exact 2x2 matrices of
// L_u and S* on the model space spanned by the kernels
//
//   e0(z) = 1 / (1 - conj(p) z),   e1(z) = z / (1 - conj(p) z)^2.

#include <cmath>

#include "cslab/hardy.hpp"

namespace cslab {

inline constexpr double constraint_tolerance = 1e-12;

struct FiniteGapData {
  double theta = 0.0;
  int m = 0;
  cplx p;
  cplx a;
  cplx c;
  double r = 0.0;   // |p|^2
  double rho = 0.0; // |p|

  /// a and c with the phase e^{i theta} folded in.
  cplx effective_a() const { return std::polar(1.0, theta) * a; }
  cplx effective_c() const { return std::polar(1.0, theta) * c; }

  double constraint_residual() const {
    return std::abs(a * std::conj(c) + std::norm(c) / (1.0 - r) - 2.0);
  }
  /// The real ratio a/c = a conj(c) / |c|^2.
  double ratio() const { return (a * std::conj(c)).real() / std::norm(c); }
};

namespace detail {
inline void check_pole(cplx p) {
  const double rho = std::abs(p);
  if (!(rho > 0.0 && rho < 1.0))
    throw DomainError("finite-gap data: need 0 < |p| < 1");
}
} // namespace detail

inline FiniteGapData make_finite_gap(double theta, int m, cplx p, cplx a,
                                     cplx c) {
  detail::check_pole(p);
  if (m < 0)
    throw DomainError("finite-gap data: m must be non-negative");
  FiniteGapData d{theta, m, p, a, c, std::norm(p), std::abs(p)};
  const double residual = d.constraint_residual();
  if (!(residual <= constraint_tolerance))
    throw ConstraintViolation("finite-gap data: constraint violated, residual " +
                                  std::to_string(residual),
                              residual);
  return d;
}

/// Resonant datum 2a + c = 0. The phase e^{i theta} is carried by a, and the
/// stored theta is zero.
inline FiniteGapData make_resonant(double theta, int m, cplx p) {
  detail::check_pole(p);
  const double r = std::norm(p);
  const cplx a = std::polar(std::sqrt((1.0 - r) / (1.0 + r)), theta);
  return make_finite_gap(0.0, m, p, a, -2.0 * a);
}

/// Taylor coefficients of e0 = sum conj(p)^n z^n.
inline HardyCoeffs kernel_e0(cplx p, int truncation) {
  CVector v(truncation + 1);
  const cplx pb = std::conj(p);
  cplx pw = 1.0;
  for (int n = 0; n <= truncation; ++n, pw *= pb)
    v[n] = pw;
  return HardyCoeffs(std::move(v));
}

/// Taylor coefficients of e1 = sum n conj(p)^{n-1} z^n.
inline HardyCoeffs kernel_e1(cplx p, int truncation) {
  CVector v = CVector::Zero(truncation + 1);
  const cplx pb = std::conj(p);
  cplx pw = 1.0;
  for (int n = 1; n <= truncation; ++n, pw *= pb)
    v[n] = double(n) * pw;
  return HardyCoeffs(std::move(v));
}

/// Taylor coefficients of psi = beta_p^2.
inline HardyCoeffs blaschke_square(cplx p, int truncation) {
  // psi = (-p + (1-r) z e0)^2 = p^2 - 2p(1-r) z e0 + (1-r)^2 z e1.
  const double r = std::norm(p);
  const HardyCoeffs e0 = kernel_e0(p, truncation);
  const HardyCoeffs e1 = kernel_e1(p, truncation);
  CVector v = CVector::Zero(truncation + 1);
  v[0] = p * p;
  for (int n = 1; n <= truncation; ++n)
    v[n] = -2.0 * p * (1.0 - r) * e0[n - 1] + (1.0 - r) * (1.0 - r) * e1[n - 1];
  return HardyCoeffs(std::move(v));
}

/// Coefficients of u0 up to mode N.
inline HardyCoeffs synthesize_coeffs(const FiniteGapData &d, int truncation) {
  // beta_p (a + c e0) = a(-p + (1-r) z e0) + c(-p e0 + (1-r) e1)
  const cplx pb = std::conj(d.p);
  const cplx phase = std::polar(1.0, d.theta);
  CVector v = CVector::Zero(truncation + 1);
  cplx pw = 1.0; // conj(p)^{n-1}
  for (int n = 0; n + d.m <= truncation; ++n) {
    cplx core;
    if (n == 0) {
      core = -d.p * (d.a + d.c);
    } else {
      core = d.a * (1.0 - d.r) * pw +
             d.c * (-d.p * pw * pb + (1.0 - d.r) * double(n) * pw);
      pw *= pb;
    }
    v[n + d.m] = phase * core;
  }
  return HardyCoeffs(std::move(v));
}

/// Matrices of L_u and S* on span(e0, e1), columns are images of e0 and e1.
struct CoreBlock {
  Eigen::Matrix2cd L_block;
  Eigen::Matrix2cd Sstar_block;
  cplx alpha;
  double beta = 0.0;
  double kappa = 0.0;
};

inline CoreBlock core_block_matrices(const FiniteGapData &d) {
  // The constraint forces a/c to be real, which makes beta and kappa real.
  const double k = d.ratio();
  const double one_minus_r = 1.0 - d.r;
  const cplx pb = std::conj(d.p);
  CoreBlock b;
  b.alpha = 2.0 * d.p * (k + 1.0) / one_minus_r;
  b.beta = (2.0 * d.r * (k + 1.0) - 2.0 * k - one_minus_r) / one_minus_r;
  b.kappa = 2.0 * d.r * (k + 1.0) / one_minus_r;
  b.L_block << 0.0, b.alpha, pb, b.beta;
  b.Sstar_block << pb, 1.0, 0.0, pb;
  return b;
}

/// Gram matrix H(i,j) = <e_j, e_i>, so that ||x0 e0 + x1 e1||^2 = x^H H x.
inline Eigen::Matrix2cd core_gram(cplx p) {
  const double r = std::norm(p);
  const double s = 1.0 - r;
  Eigen::Matrix2cd h;
  h << 1.0 / s, p / (s * s), std::conj(p) / (s * s), (1.0 + r) / (s * s * s);
  return h;
}

/// Coordinates of S* psi in (e0, e1).
inline Eigen::Vector2cd sstar_psi_coords(cplx p) {
  const double s = 1.0 - std::norm(p);
  return Eigen::Vector2cd(-2.0 * p * s, s * s);
}

} // namespace cslab
