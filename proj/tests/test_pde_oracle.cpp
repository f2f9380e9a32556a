#include <gtest/gtest.h>

#include "cslab/closed_form.hpp"
#include "cslab/pde_oracle.hpp"

using namespace cslab;

namespace {

double relative_error(const HardyCoeffs &a, const HardyCoeffs &b) {
  const Eigen::Index n = std::min(a.size(), b.size());
  return (a.values().head(n) - b.values().head(n)).norm() / b.values().head(n).norm();
}

} // namespace

TEST(Nonlinearity, Examples) {
  EXPECT_EQ(l2_norm(nonlinearity(HardyCoeffs{cplx(0.7, -0.2), 0.0, 0.0})), 0.0);
  EXPECT_EQ(l2_norm(nonlinearity(HardyCoeffs::monomial(1, 6))), 0.0);
  EXPECT_EQ(l2_norm(nonlinearity(HardyCoeffs::monomial(3, 6))), 0.0);
  const HardyCoeffs g = nonlinearity(HardyCoeffs{1.0, 1.0, 0.0, 0.0});
  EXPECT_EQ(g[0], cplx(0.0));
  EXPECT_EQ(g[1], cplx(2.0));
  EXPECT_EQ(g[2], cplx(2.0));
  EXPECT_EQ(g[3], cplx(0.0));
}

TEST(Nonlinearity, MatchesGridProduct) {
  // Oracle: form |u|^2 and the products on a fine grid of the circle.
  const HardyCoeffs u = synthesize_coeffs(make_resonant(0.3, 1, cplx(0.2, 0.3)), 24);
  const int N = u.truncation();
  const int M = 256;
  std::vector<cplx> vals(M);
  std::vector<double> mod2(M);
  for (int j = 0; j < M; ++j) {
    vals[j] = eval_disk(u, std::polar(1.0, 2.0 * pi * j / M));
    mod2[j] = std::norm(vals[j]);
  }
  // Fourier modes of |u|^2, then D Pi.
  std::vector<cplx> dpi(N + 1);
  for (int k = 1; k <= N; ++k) {
    cplx acc{};
    for (int j = 0; j < M; ++j)
      acc += mod2[j] * std::polar(1.0, -2.0 * pi * k * j / M);
    dpi[k] = double(k) * acc / double(M);
  }
  const HardyCoeffs g = nonlinearity(u);
  for (int n = 0; n <= N; ++n) {
    cplx acc{};
    for (int k = 1; k <= n; ++k)
      acc += dpi[k] * u[n - k];
    EXPECT_NEAR(std::abs(g[n] - 2.0 * acc), 0.0, 1e-12) << "mode " << n;
  }
}

TEST(Step, Examples) {
  const HardyCoeffs z = HardyCoeffs::monomial(1, 16);
  const HardyCoeffs s = step(z, 1e-3);
  EXPECT_NEAR(std::abs(s[1] - std::polar(1.0, -1e-3)), 0.0, 1e-12);
  EXPECT_LE((s.values() - std::polar(1.0, -1e-3) * z.values()).norm(), 1e-12);
  EXPECT_EQ(l2_norm(step(HardyCoeffs::zeros(8), 0.1)), 0.0);
  EXPECT_THROW(step(z, 0.0), PreconditionError);
}

TEST(Step, LinearPhases) {
  const HardyCoeffs u = synthesize_coeffs(make_resonant(0.0, 0, 0.5), 32);
  const double h = 0.013;
  const HardyCoeffs s = step(u, h, 0.0, true);
  for (int n = 0; n <= 32; ++n)
    EXPECT_NEAR(std::abs(s[n] - std::polar(1.0, -double(n) * n * h) * u[n]), 0.0, 1e-14);
}

TEST(Step, NonFiniteIsBlowup) {
  CVector v = CVector::Zero(4);
  v[1] = 1e200;
  v[2] = 1e200;
  try {
    step(HardyCoeffs(v), 0.1, 2.0);
    FAIL() << "expected BlowupSuspected";
  } catch (const BlowupSuspected &e) {
    EXPECT_GE(e.time(), 2.0);
  }
}

TEST(Evolve, PlaneWave) {
  OracleOptions opt;
  opt.dt = 1e-3;
  opt.output_stride = 0.25;
  const Trajectory tr = evolve(HardyCoeffs::monomial(1, 16), 1.0, opt);
  ASSERT_EQ(tr.times.size(), 5u);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    if (k > 0)
      EXPECT_GT(tr.times[k], tr.times[k - 1]);
    const CVector expect = std::polar(1.0, -tr.times[k]) * HardyCoeffs::monomial(1, 16).values();
    EXPECT_LE((tr.states[k].values() - expect).norm(), 1e-10);
  }
  EXPECT_DOUBLE_EQ(tr.times.back(), 1.0);
}

TEST(Evolve, ConvergenceOrder) {
  // Short resonant run, where the truncation at N = 128 is negligible.
  const FiniteGapData d = make_resonant(0.0, 0, 0.5);
  const HardyCoeffs u0 = synthesize_coeffs(d, 128);
  const double t_end = 0.2;
  const HardyCoeffs exact = solution_coeffs(d, t_end, 128);
  const double e1 = relative_error(evolve(u0, t_end, 2e-3).states.back(), exact);
  const double e2 = relative_error(evolve(u0, t_end, 1e-3).states.back(), exact);
  EXPECT_NEAR(e1 / e2, 16.0, 4.0) << e1 << " " << e2;
}

TEST(Evolve, MatchesClosedFormBeforeTruncationFloor) {
  // At N = 128 the closed-form solution is resolved to 1e-6 up to about 0.4 T.
  const FiniteGapData d = make_resonant(0.0, 0, 0.5);
  const double t = 0.4 * blowup_time(0.5);
  const Trajectory tr = evolve(synthesize_coeffs(d, 128), t, 1e-4);
  EXPECT_LE(relative_error(tr.states.back(), solution_coeffs(d, t, 128)), 1e-6);
}

TEST(Evolve, InvariantsAlongTrajectory) {
  const FiniteGapData d = make_finite_gap(0.0, 0, 0.5, 2.0 / 3.0, 1.0);
  const HardyCoeffs u0 = synthesize_coeffs(d, 128);
  OracleOptions opt;
  opt.dt = 1e-4;
  opt.output_stride = 0.25;
  const Trajectory tr = evolve(u0, 5.0, opt);
  const double h1 = hs_norm(u0, 1.0);
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const HardyCoeffs &u = tr.states[k];
    EXPECT_EQ(u.truncation(), 128);
    EXPECT_NEAR(std::abs(u[0] - u0[0]), 0.0, 1e-12);
    EXPECT_LE(hs_norm(u, 1.0), 2.0 * h1);
    EXPECT_NEAR(tr.conserved[k][0], tr.conserved[0][0], 1e-8);
  }
}

TEST(Evolve, Errors) {
  const HardyCoeffs u0 = HardyCoeffs::monomial(1, 4);
  EXPECT_THROW(evolve(u0, 0.0, 1e-3), PreconditionError);
  EXPECT_THROW(evolve(u0, 1.0, -1e-3), PreconditionError);
  EXPECT_THROW(evolve_to_times(u0, {0.5, 0.2}), PreconditionError);
}
