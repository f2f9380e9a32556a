#pragma once

// Truncated Hardy-space arithmetic on the torus.
//
// A function f(z) = sum_{n>=0} f_n z^n is stored by its first N+1 Taylor
// coefficients. Full Fourier series (negative modes allowed) are stored as
// LaurentCoeffs with modes -N..N. The pairing is the normalized one,
// <f, g> = sum_n f_n conj(g_n), so that <1, 1> = 1.

#include <cmath>
#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cslab/errors.hpp"

namespace cslab {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr int default_truncation = 256;

namespace detail {
inline bool all_finite(const CVector &v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
      return false;
  return true;
}
} // namespace detail

/// Taylor coefficients 0..N of a Hardy-space function.
class HardyCoeffs {
public:
  explicit HardyCoeffs(CVector values) : values_(std::move(values)) {
    if (values_.size() < 1)
      throw DomainError("HardyCoeffs: need at least one coefficient");
    if (!detail::all_finite(values_))
      throw DomainError("HardyCoeffs: non-finite coefficient");
  }
  HardyCoeffs(std::initializer_list<cplx> values)
      : HardyCoeffs(from_list(values)) {}

  static HardyCoeffs zeros(int truncation) {
    if (truncation < 0)
      throw DomainError("HardyCoeffs: negative truncation");
    return HardyCoeffs(CVector::Zero(truncation + 1));
  }
  /// The monomial z^k truncated at N.
  static HardyCoeffs monomial(int k, int truncation, cplx scale = 1.0) {
    auto out = zeros(truncation);
    if (k >= 0 && k <= truncation)
      out.values_[k] = scale;
    return out;
  }
  /// Copies `values` into a vector of length N+1, zero padding or dropping the tail.
  static HardyCoeffs from_span(std::span<const cplx> values, int truncation) {
    CVector v = CVector::Zero(truncation + 1);
    for (std::size_t n = 0; n < values.size() && n <= std::size_t(truncation); ++n)
      v[Eigen::Index(n)] = values[n];
    return HardyCoeffs(std::move(v));
  }

  int truncation() const { return int(values_.size()) - 1; }
  Eigen::Index size() const { return values_.size(); }
  const CVector &values() const { return values_; }
  cplx operator[](Eigen::Index n) const { return values_[n]; }

  /// Same function re-truncated at a different order.
  HardyCoeffs resized(int truncation) const {
    CVector v = CVector::Zero(truncation + 1);
    const Eigen::Index k = std::min<Eigen::Index>(v.size(), values_.size());
    v.head(k) = values_.head(k);
    return HardyCoeffs(std::move(v));
  }

private:
  static CVector from_list(std::initializer_list<cplx> values) {
    CVector v(Eigen::Index(values.size()));
    Eigen::Index i = 0;
    for (cplx x : values)
      v[i++] = x;
    return v;
  }

  CVector values_;
};

/// Fourier coefficients with modes -N..N.
class LaurentCoeffs {
public:
  explicit LaurentCoeffs(CVector values) : values_(std::move(values)) {
    if (values_.size() % 2 != 1)
      throw DomainError("LaurentCoeffs: length must be 2N+1");
    if (!detail::all_finite(values_))
      throw DomainError("LaurentCoeffs: non-finite coefficient");
  }
  static LaurentCoeffs zeros(int truncation) {
    return LaurentCoeffs(CVector::Zero(2 * truncation + 1));
  }

  int truncation() const { return int(values_.size() - 1) / 2; }
  const CVector &values() const { return values_; }
  /// Mode n in -N..N; modes outside the window read as zero.
  cplx at(int n) const {
    const int N = truncation();
    return (n < -N || n > N) ? cplx{} : values_[n + N];
  }
  void set(int n, cplx value) {
    const int N = truncation();
    if (n < -N || n > N)
      throw DomainError("LaurentCoeffs: mode outside the window");
    values_[n + N] = value;
  }

private:
  CVector values_;
};

/// Szego projection: keep the non-negative modes.
inline HardyCoeffs project_szego(const LaurentCoeffs &f) {
  const int N = f.truncation();
  return HardyCoeffs(f.values().tail(N + 1));
}

/// Inclusion of the Hardy space into the full Fourier series.
inline LaurentCoeffs embed(const HardyCoeffs &f) {
  const int N = f.truncation();
  CVector v = CVector::Zero(2 * N + 1);
  v.tail(N + 1) = f.values();
  return LaurentCoeffs(std::move(v));
}

inline cplx inner_product(const HardyCoeffs &f, const HardyCoeffs &g) {
  if (f.truncation() != g.truncation())
    throw PreconditionError("inner_product: mismatched truncation");
  // Eigen's dot conjugates the first argument.
  return g.values().dot(f.values());
}

inline double l2_norm(const HardyCoeffs &f) { return f.values().norm(); }

/// Sobolev norm with weights (1+n^2)^s.
inline double hs_norm(const HardyCoeffs &f, double s) {
  if (!(s >= 0.0))
    throw DomainError("hs_norm: s must be non-negative");
  double acc = 0.0;
  for (Eigen::Index n = 0; n < f.size(); ++n)
    acc += std::pow(1.0 + double(n) * double(n), s) * std::norm(f[n]);
  return std::sqrt(acc);
}

enum class ShiftDirection { forward, adjoint };

/// Forward shift S f = z f (top mode dropped) or backward shift S* f = (f - f(0))/z.
inline HardyCoeffs shift(const HardyCoeffs &f, ShiftDirection direction) {
  const Eigen::Index n = f.size();
  CVector v = CVector::Zero(n);
  if (direction == ShiftDirection::adjoint)
    v.head(n - 1) = f.values().tail(n - 1);
  else
    v.tail(n - 1) = f.values().head(n - 1);
  return HardyCoeffs(std::move(v));
}

/// Matrix of the backward shift on modes 0..N.
inline CMatrix adjoint_shift_matrix(int truncation) {
  CMatrix m = CMatrix::Zero(truncation + 1, truncation + 1);
  for (int j = 0; j < truncation; ++j)
    m(j, j + 1) = 1.0;
  return m;
}

/// Truncated Toeplitz matrix, entry (j,k) = symbol[j-k].
inline CMatrix toeplitz_matrix(const LaurentCoeffs &symbol, int truncation) {
  if (symbol.truncation() < truncation)
    throw PreconditionError("toeplitz_matrix: symbol truncation below N");
  CMatrix m(truncation + 1, truncation + 1);
  for (int j = 0; j <= truncation; ++j)
    for (int k = 0; k <= truncation; ++k)
      m(j, k) = symbol.at(j - k);
  return m;
}

/// Toeplitz matrix of an analytic symbol u (lower triangular).
inline CMatrix analytic_toeplitz(const HardyCoeffs &u) {
  return toeplitz_matrix(embed(u), u.truncation());
}

/// Horner evaluation of sum f_n z^n on the closed unit disk.
inline cplx eval_disk(const HardyCoeffs &f, cplx z) {
  if (std::abs(z) > 1.0 + 1e-15)
    throw DomainError("eval_disk: |z| > 1");
  cplx acc{};
  for (Eigen::Index n = f.size() - 1; n >= 0; --n)
    acc = acc * z + f[n];
  return acc;
}

/// Fourier coefficients of |u|^2 on the torus, modes -N..N.
inline LaurentCoeffs modulus_squared(const HardyCoeffs &u) {
  const int N = u.truncation();
  auto out = LaurentCoeffs::zeros(N);
  const CVector &c = u.values();
  // (|u|^2)_k = sum_j u_{j+k} conj(u_j); the negative modes are conjugates.
  for (int k = 0; k <= N; ++k) {
    cplx acc{};
    for (int j = 0; j + k <= N; ++j)
      acc += c[j + k] * std::conj(c[j]);
    out.set(k, acc);
    if (k > 0)
      out.set(-k, std::conj(acc));
  }
  return out;
}

} // namespace cslab
