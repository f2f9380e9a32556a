#include <random>

#include <gtest/gtest.h>

#include "cslab/closed_form.hpp"
#include "cslab/explicit_formula.hpp"

using namespace cslab;

namespace {

CVector random_vector(std::mt19937_64 &rng, int n) {
  std::normal_distribution<double> g;
  CVector v(n);
  for (auto &x : v)
    x = {g(rng), g(rng)};
  return v;
}

// Valid non-resonant data with a = k c.
FiniteGapData with_ratio(cplx p, double k, int m) {
  const double c = std::sqrt(2.0 / (k + 1.0 / (1.0 - std::norm(p))));
  return make_finite_gap(0.3, m, p, k * c, c);
}

} // namespace

TEST(Evaluate, AtZeroReproducesSeries) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const HardyCoeffs u0 = synthesize_coeffs(make_finite_gap(0.0, 1, 0.5, 2.0 / 3.0, 1.0), 128);
  const ResolventState st = make_state(u0, 0.0);
  for (int k = 0; k < 10; ++k) {
    const cplx z = std::polar(0.95 * std::sqrt(u(rng)), 2.0 * pi * u(rng));
    EXPECT_NEAR(std::abs(evaluate(st, z) - eval_disk(u0, z)), 0.0, 1e-10);
  }
}

TEST(Evaluate, PlaneWave) {
  const HardyCoeffs u0 = HardyCoeffs::monomial(1, 32);
  for (double t : {0.3, 1.7, 12.0}) {
    const ResolventState st = make_state(u0, t);
    for (cplx z : {cplx(0.5, 0.2), cplx(0.0, -0.9), cplx(0.7, 0.7)})
      EXPECT_NEAR(std::abs(evaluate(st, z) - std::polar(1.0, -t) * z), 0.0, 1e-10);
  }
}

TEST(Evaluate, MatchesClosedForm) {
  const FiniteGapData d = make_resonant(0.0, 0, 0.5);
  const double T = blowup_time(0.5);
  const ResolventState st = make_state(synthesize_coeffs(d, 256), T / 2);
  const cplx z = std::polar(0.9, pi / 3);
  EXPECT_NEAR(std::abs(evaluate(st, z) - closed_form_value(d, T / 2, z)), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(evaluate(st, 1.0) - closed_form_value(d, T / 2, 1.0)), 0.0, 1e-8);
}

TEST(Evaluate, Errors) {
  const HardyCoeffs u0 = HardyCoeffs::monomial(0, 4);
  const ResolventState st = make_state(u0, 0.1);
  EXPECT_THROW(evaluate(st, 1.2), DomainError);
  // A singular resolvent: Sigma = I at z = 1.
  const ResolventState bad{u0, build_lax_matrix(u0), 0.0, CMatrix::Identity(5, 5)};
  try {
    evaluate(bad, 1.0);
    FAIL() << "expected IllConditioned";
  } catch (const IllConditioned &e) {
    EXPECT_GT(e.condition(), condition_limit);
  }
}

TEST(SigmaMatrix, ContractionAndDefect) {
  std::mt19937_64 rng(52);
  const ExplicitFormulaEngine eng(synthesize_coeffs(make_resonant(0.2, 1, cplx(0.3, 0.4)), 64));
  for (double t : {0.0, 0.5, 3.0}) {
    const CMatrix S = eng.sigma_matrix(t);
    for (int trial = 0; trial < 5; ++trial) {
      const CVector v = random_vector(rng, 65);
      const double lhs = (S * v).squaredNorm();
      EXPECT_LE(lhs, v.squaredNorm() * (1.0 + 1e-14));
      EXPECT_NEAR(lhs, v.squaredNorm() - std::norm(v[0]), 1e-12 * v.squaredNorm());
    }
  }
}

TEST(Reconstruct, Examples) {
  const FiniteGapData d = make_resonant(0.0, 0, 0.5);
  const HardyCoeffs u0 = synthesize_coeffs(d, 256);
  const ExplicitFormulaEngine eng(u0);
  const HardyCoeffs at0 = reconstruct_coeffs(make_state(eng, 0.0), 200);
  EXPECT_LE((at0.values() - u0.values().head(201)).cwiseAbs().maxCoeff(), 1e-12);
  for (double t : {0.1, 0.7, 5.0})
    EXPECT_EQ(reconstruct_coeffs(make_state(eng, t), 3)[0], u0[0]);
  EXPECT_THROW(reconstruct_coeffs(make_state(eng, 0.1), 257), PreconditionError);
}

TEST(Reconstruct, MatchesClosedForm) {
  const FiniteGapData d = make_resonant(0.0, 0, 0.5);
  const double T = blowup_time(0.5);
  const ExplicitFormulaEngine eng(synthesize_coeffs(d, 256));
  for (double frac : {0.25, 0.5}) {
    const HardyCoeffs ref = solution_coeffs(d, frac * T, 256);
    const Reconstruction rec = reconstruct_with_tail(make_state(eng, frac * T), 128);
    EXPECT_LE((rec.coeffs.values() - ref.values().head(129)).cwiseAbs().maxCoeff(), 1e-8)
        << "frac " << frac;
  }
}

TEST(CoefficientSweep, MatchesNeumannIteration) {
  const ExplicitFormulaEngine eng(synthesize_coeffs(with_ratio(cplx(0.2, 0.3), 0.7, 2), 96));
  const CoefficientSweep sweep(eng);
  for (double t : {0.0, 0.4, 2.5}) {
    const HardyCoeffs a = sweep.coeffs(t);
    const HardyCoeffs b = reconstruct_coeffs(make_state(eng, t), 96);
    EXPECT_LE((a.values() - b.values()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(NormIdentity, TelescopesOnTruncatedModes) {
  // sum_{n<K} |M Sigma^n u0|^2 + ||Sigma^K u0||^2 = ||u0||^2 with K = 500.
  auto check = [](const HardyCoeffs &u0, double t, double &trapped) {
    const CMatrix S = ExplicitFormulaEngine(u0).sigma_matrix(t);
    CVector w = u0.values();
    double sum = 0.0;
    for (int n = 0; n < 500; ++n) {
      sum += std::norm(w[0]);
      w = S * w;
    }
    trapped = w.squaredNorm();
    return sum + trapped - u0.values().squaredNorm();
  };
  double trapped = 0.0;
  const HardyCoeffs non = synthesize_coeffs(make_finite_gap(0.0, 0, 0.5, 2.0 / 3.0, 1.0), 256);
  EXPECT_NEAR(check(non, 1.0, trapped), 0.0, 1e-6);
  EXPECT_LE(trapped, 1e-12);
  // At the blow-up time a unit of mass stays trapped.
  const HardyCoeffs res = synthesize_coeffs(make_resonant(0.0, 0, 0.5), 256);
  EXPECT_NEAR(check(res, blowup_time(0.5), trapped), 0.0, 1e-6);
  EXPECT_NEAR(trapped, 1.0, 1e-6);
}

TEST(MeanInvariance, AcrossTimes) {
  std::mt19937_64 rng(53);
  const HardyCoeffs u0(random_vector(rng, 41));
  const ExplicitFormulaEngine eng(u0);
  const CoefficientSweep sweep(eng);
  for (double t : {0.2, 1.0, 9.0}) {
    EXPECT_EQ(reconstruct_coeffs(make_state(eng, t), 5)[0], u0[0]);
    EXPECT_NEAR(std::abs(sweep.coeffs(t)[0] - u0[0]), 0.0, 1e-12 * l2_norm(u0));
  }
}
