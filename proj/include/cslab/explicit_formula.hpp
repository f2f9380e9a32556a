#pragma once

// Solution of the flow for arbitrary Hardy data through the explicit formula
//
//   u(t, z) = < (I - z Sigma_t^*)^{-1} u0, 1 >,   Sigma_t^* = e^{-it} e^{-2itL} S*,
//
// with L the Lax operator of u0. Coefficient n of u(t) is the mean of
// (Sigma_t^*)^n u0.

#include <memory>

#include <Eigen/LU>

#include "cslab/lax.hpp"

namespace cslab {

inline constexpr double condition_limit = 1e12;

/// Lax data of u0, shared by every ResolventState built from it.
class ExplicitFormulaEngine {
public:
  explicit ExplicitFormulaEngine(HardyCoeffs u0)
      : u0_(std::move(u0)), L_(build_lax_matrix(u0_)),
        eig_(std::make_shared<const LaxEigensystem>(L_)) {}

  const HardyCoeffs &initial() const { return u0_; }
  const LaxMatrix &lax() const { return L_; }
  const LaxEigensystem &eigensystem() const { return *eig_; }
  int truncation() const { return u0_.truncation(); }

  /// e^{-it} e^{-2itL} S* on modes 0..N.
  CMatrix sigma_matrix(double t) const {
    const Propagator U = propagator(*eig_, t);
    const Eigen::Index n = U.matrix.rows();
    CMatrix sigma = CMatrix::Zero(n, n);
    // (U S*)(:, k) = U(:, k-1)
    sigma.rightCols(n - 1) = std::polar(1.0, -t) * U.matrix.leftCols(n - 1);
    return sigma;
  }

private:
  HardyCoeffs u0_;
  LaxMatrix L_;
  std::shared_ptr<const LaxEigensystem> eig_;
};

struct ResolventState {
  HardyCoeffs u0;
  LaxMatrix L;
  double t = 0.0;
  CMatrix sigma_matrix;
};

inline ResolventState make_state(const ExplicitFormulaEngine &engine, double t) {
  return ResolventState{engine.initial(), engine.lax(), t,
                        engine.sigma_matrix(t)};
}

inline ResolventState make_state(const HardyCoeffs &u0, double t) {
  return make_state(ExplicitFormulaEngine(u0), t);
}

/// Solves (I - z Sigma) w = u0 and returns w[0].
inline cplx evaluate(const ResolventState &state, cplx z) {
  if (std::abs(z) > 1.0 + 1e-15)
    throw DomainError("evaluate: |z| > 1");
  const Eigen::Index n = state.sigma_matrix.rows();
  const CMatrix A = CMatrix::Identity(n, n) - z * state.sigma_matrix;
  const Eigen::PartialPivLU<CMatrix> lu(A);
  const double rcond = lu.rcond();
  if (!(rcond > 1.0 / condition_limit))
    throw IllConditioned("evaluate: resolvent is ill-conditioned",
                         rcond > 0.0 ? 1.0 / rcond : INFINITY);
  const CVector w = lu.solve(state.u0.values());
  return w[0];
}

struct Reconstruction {
  HardyCoeffs coeffs;
  double tail_bound = 0.0; // ||Sigma^{M+1} u0||
};

/// Coefficients 0..M by iterated matrix-vector products, with the norm of the
/// next iterate as a tail bound.
inline Reconstruction reconstruct_with_tail(const ResolventState &state, int M) {
  if (M < 0 || M > state.u0.truncation())
    throw PreconditionError("reconstruct_coeffs: need 0 <= M <= N");
  CVector out(M + 1);
  CVector w = state.u0.values();
  for (int n = 0; n <= M; ++n) {
    out[n] = w[0];
    w = state.sigma_matrix * w;
  }
  return Reconstruction{HardyCoeffs(std::move(out)), w.norm()};
}

inline HardyCoeffs reconstruct_coeffs(const ResolventState &state, int M) {
  return reconstruct_with_tail(state, M).coeffs;
}

/// Coefficients 0..N of u(t) using the eigenbasis of L, which avoids forming
/// the propagator: with K = V^H S* V, iterate y <- e^{-it} diag(e^{-2it lambda}) K y
/// and read the mean as row 0 of V times y.
class CoefficientSweep {
public:
  explicit CoefficientSweep(const ExplicitFormulaEngine &engine)
      : lambda_(engine.eigensystem().eigenvalues()) {
    const CMatrix &V = engine.eigensystem().eigenvectors();
    const Eigen::Index n = V.rows();
    // S* V drops the first row of V.
    CMatrix SV = CMatrix::Zero(n, n);
    SV.topRows(n - 1) = V.bottomRows(n - 1);
    K_ = V.adjoint() * SV;
    row0_ = V.row(0);
    y0_ = V.adjoint() * engine.initial().values();
  }

  HardyCoeffs coeffs(double t) const {
    CVector ph(lambda_.size());
    for (Eigen::Index k = 0; k < ph.size(); ++k)
      ph[k] = std::polar(1.0, -t - 2.0 * t * lambda_[k]);
    const Eigen::Index n = y0_.size();
    CVector out(n);
    CVector y = y0_;
    for (Eigen::Index k = 0; k < n; ++k) {
      out[k] = (row0_ * y)(0);
      y = ph.asDiagonal() * (K_ * y);
    }
    return HardyCoeffs(std::move(out));
  }

private:
  Eigen::VectorXd lambda_;
  CMatrix K_;
  Eigen::RowVectorXcd row0_;
  CVector y0_;
};

} // namespace cslab
