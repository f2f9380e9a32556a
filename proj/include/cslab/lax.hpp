#pragma once

// Truncated Lax operator L_u = D - T_u T_{conj u}, its unitary group and the
// conserved quantities I_k[u] = <u, L_u^k u>.

#include <memory>

#include <Eigen/Eigenvalues>

#include "cslab/hardy.hpp"

namespace cslab {

/// Hermitian (N+1)x(N+1) matrix of L_u on modes 0..N.
struct LaxMatrix {
  CMatrix entries;
  int truncation() const { return int(entries.rows()) - 1; }
};

/// diag(0..N) - M M^H with M the analytic Toeplitz matrix of u. The product is
/// exact on the truncated modes because M is lower triangular.
inline LaxMatrix build_lax_matrix(const HardyCoeffs &u) {
  const int N = u.truncation();
  const CMatrix M = analytic_toeplitz(u);
  CMatrix L = -(M * M.adjoint());
  for (int n = 0; n <= N; ++n)
    L(n, n) += double(n);
  // Symmetrize the rounding of the product so that L == L^H bit for bit.
  CMatrix H = 0.5 * (L + L.adjoint());
  for (int n = 0; n <= N; ++n)
    H(n, n) = H(n, n).real();
  return LaxMatrix{std::move(H)};
}

/// Eigendecomposition L = V diag(lambda) V^H, reused for every time sample.
class LaxEigensystem {
public:
  explicit LaxEigensystem(const LaxMatrix &L) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(L.entries);
    if (solver.info() != Eigen::Success)
      throw NumericalFailure("LaxEigensystem: eigendecomposition failed");
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
  }

  const Eigen::VectorXd &eigenvalues() const { return eigenvalues_; }
  const CMatrix &eigenvectors() const { return eigenvectors_; }
  int truncation() const { return int(eigenvalues_.size()) - 1; }

  /// Phases exp(-i * scale * lambda_k).
  CVector phases(double scale) const {
    CVector ph(eigenvalues_.size());
    for (Eigen::Index k = 0; k < ph.size(); ++k)
      ph[k] = std::polar(1.0, -scale * eigenvalues_[k]);
    return ph;
  }

private:
  Eigen::VectorXd eigenvalues_;
  CMatrix eigenvectors_;
};

/// exp(-2 i t L) on the truncated modes.
struct Propagator {
  CMatrix matrix;
  double t = 0.0;
};

inline Propagator propagator(const LaxEigensystem &eig, double t) {
  const CMatrix &V = eig.eigenvectors();
  CMatrix U = V * eig.phases(2.0 * t).asDiagonal() * V.adjoint();
  return Propagator{std::move(U), t};
}

inline Propagator propagator(const LaxMatrix &L, double t) {
  const double asym = (L.entries - L.entries.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12)
    throw NumericalFailure("propagator: Lax matrix is not Hermitian");
  return propagator(LaxEigensystem(L), t);
}

/// I_k[u] = <u, L_u^k u> by k matrix-vector products.
inline double conserved_quantity(const HardyCoeffs &u, int k,
                                 const LaxMatrix &L) {
  if (k < 0)
    throw DomainError("conserved_quantity: k must be non-negative");
  CVector w = u.values();
  for (int j = 0; j < k; ++j)
    w = L.entries * w;
  const cplx value = w.dot(u.values()); // <u, L^k u>
  const double scale = std::max(1.0, std::abs(value));
  if (std::abs(value.imag()) > 1e-10 * scale)
    throw NumericalFailure("conserved_quantity: imaginary part too large");
  return value.real();
}

inline double conserved_quantity(const HardyCoeffs &u, int k) {
  if (k < 0)
    throw DomainError("conserved_quantity: k must be non-negative");
  return conserved_quantity(u, k, build_lax_matrix(u));
}

} // namespace cslab
