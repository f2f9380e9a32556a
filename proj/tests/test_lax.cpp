#include <random>

#include <gtest/gtest.h>

#include "cslab/finite_gap.hpp"
#include "cslab/lax.hpp"

using namespace cslab;

TEST(LaxMatrix, FreeCaseIsDiagonal) {
  const LaxMatrix L = build_lax_matrix(HardyCoeffs::zeros(6));
  for (int j = 0; j <= 6; ++j)
    for (int k = 0; k <= 6; ++k)
      EXPECT_EQ(L.entries(j, k), cplx(j == k ? double(j) : 0.0));
}

TEST(LaxMatrix, ExactlyHermitian) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  CVector v(40);
  for (auto &x : v)
    x = {g(rng), g(rng)};
  const LaxMatrix L = build_lax_matrix(HardyCoeffs(v));
  EXPECT_EQ((L.entries - L.entries.adjoint()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(LaxMatrix, ActionOnKernelsResonant) {
  // L e0 = conj(p) e1 and L e1 = alpha e0 + beta e1 with alpha = beta = 2/3.
  const int N = 256;
  const FiniteGapData d = make_resonant(0.0, 0, 0.5);
  const LaxMatrix L = build_lax_matrix(synthesize_coeffs(d, N));
  const CVector e0 = kernel_e0(0.5, N).values(), e1 = kernel_e1(0.5, N).values();
  EXPECT_LE((L.entries * e0 - 0.5 * e1).norm(), 1e-8);
  EXPECT_LE((L.entries * e1 - (2.0 / 3.0 * e0 + 2.0 / 3.0 * e1)).norm(), 1e-8);
}

TEST(LaxMatrix, GaugeInvariant) {
  const HardyCoeffs u = synthesize_coeffs(make_finite_gap(0.0, 0, 0.5, 2.0 / 3.0, 1.0), 40);
  const HardyCoeffs v(CVector(std::polar(1.0, 1.3) * u.values()));
  const CMatrix diff = build_lax_matrix(u).entries - build_lax_matrix(v).entries;
  // Equal up to the rounding of the phase products.
  EXPECT_LE(diff.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Propagator, IdentityAtZero) {
  const LaxMatrix L = build_lax_matrix(synthesize_coeffs(make_resonant(0.0, 0, 0.5), 32));
  EXPECT_LE((propagator(L, 0.0).matrix - CMatrix::Identity(33, 33)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Propagator, FreeCasePhases) {
  const LaxMatrix L = build_lax_matrix(HardyCoeffs::zeros(10));
  const double t = 0.37;
  const CMatrix U = propagator(L, t).matrix;
  for (int n = 0; n <= 10; ++n)
    EXPECT_NEAR(std::abs(U(n, n) - std::polar(1.0, -2.0 * n * t)), 0.0, 1e-12);
  EXPECT_LE((U - CMatrix(U.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Propagator, UnitaryAndGroupLaw) {
  const LaxMatrix L = build_lax_matrix(synthesize_coeffs(make_finite_gap(0.0, 0, 0.5, 2.0 / 3.0, 1.0), 64));
  const LaxEigensystem eig(L);
  for (double t : {0.1, 1.3, 7.0}) {
    const CMatrix U = propagator(eig, t).matrix;
    EXPECT_LE((U.adjoint() * U - CMatrix::Identity(65, 65)).cwiseAbs().maxCoeff(), 1e-12);
  }
  const CMatrix lhs = propagator(eig, 0.4).matrix * propagator(eig, 1.1).matrix;
  EXPECT_LE((lhs - propagator(eig, 1.5).matrix).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Propagator, RejectsNonHermitian) {
  LaxMatrix L{CMatrix::Zero(3, 3)};
  L.entries(0, 1) = 1.0;
  EXPECT_THROW(propagator(L, 1.0), NumericalFailure);
}

TEST(ConservedQuantity, Examples) {
  EXPECT_NEAR(conserved_quantity(synthesize_coeffs(make_resonant(0.0, 0, 0.5), 256), 0), 1.4, 1e-8);
  // Plane wave: <Dz, z> - ||Pi(conj(z) z)||^2 = 1 - 1
  EXPECT_NEAR(conserved_quantity(HardyCoeffs::monomial(1, 16), 1), 0.0, 1e-10);
  for (int k : {0, 1, 3})
    EXPECT_EQ(conserved_quantity(HardyCoeffs::zeros(8), k), 0.0);
  EXPECT_THROW(conserved_quantity(HardyCoeffs::zeros(8), -1), DomainError);
}
