#pragma once

// Exact rational solution for resonant data (2a + c = 0).
//
// For the core datum (m = 0) the solution is
//
//   v(t,z) = a p + a zeta (N(t) - (1+r) conj(p) zeta) / D_t(zeta),
//   zeta = z e^{-i Theta(t)},  Theta(t) = (1+r) t / (1-r),
//   D_t(zeta) = 1 - conj(p) q(t) zeta + conj(p)^2 zeta^2
//             = (1 - alpha1 zeta)(1 - alpha2 zeta),
//
// and the shifted data z^m v0 evolve by u(t,z) = e^{-i m^2 t} z^m v(t, e^{-2imt} z).
// Here a already carries the phase e^{i theta}.

#include <cmath>
#include <functional>
#include <utility>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "cslab/finite_gap.hpp"
#include "cslab/resonance.hpp"

namespace cslab {

inline double blowup_time(cplx p) {
  const double rho = std::abs(p);
  if (!(rho > 0.0 && rho < 1.0))
    throw DomainError("blowup_time: need 0 < |p| < 1");
  return pi * (1.0 - rho * rho) / (4.0 * rho);
}

/// c0 = 4r(1-r)/(1+r)^3, the constant of the pole asymptotics.
inline double pole_constant(cplx p) {
  const double r = std::norm(p);
  return 4.0 * r * (1.0 - r) / std::pow(1.0 + r, 3);
}

/// sqrt(Gamma(2s+1)) ((1+r)^3 / (4r(1-r)))^s, the H^s blow-up rate constant.
inline double hs_rate_constant(cplx p, double s) {
  return std::sqrt(std::tgamma(2.0 * s + 1.0)) * std::pow(1.0 / pole_constant(p), s);
}

inline double initial_mass_resonant(cplx p) {
  const double r = std::norm(p);
  return (1.0 + 3.0 * r) / (1.0 + r);
}

struct PoleState {
  double t = 0.0;
  double Omega = 0.0;
  double Theta = 0.0;
  cplx q_t;
  cplx Delta;
  cplx N_t;
  cplx alpha1;
  cplx alpha2;
  cplx B1;
  cplx B2;
  bool has_residues = false; // false at t = 0 (double pole)
};

namespace detail {
inline void require_resonant(const FiniteGapData &d, const char *who) {
  if (classify(d) != Resonance::resonant)
    throw PreconditionError(std::string(who) +
                            ": closed form needs resonant data (2a + c = 0)");
}
} // namespace detail

inline PoleState pole_state(const FiniteGapData &d, double t) {
  detail::require_resonant(d, "pole_state");
  const double T = blowup_time(d.p);
  if (!(t >= 0.0 && t <= T))
    throw PreconditionError("pole_state: t outside [0, T]");
  const double r = d.r, rho = d.rho;
  const cplx pb = std::conj(d.p);
  const cplx a = d.effective_a();

  PoleState s;
  s.t = t;
  s.Omega = 2.0 * rho * t / (1.0 - r);
  s.Theta = (1.0 + r) * t / (1.0 - r);
  const double C = std::cos(s.Omega), S = std::sin(s.Omega);
  s.q_t = cplx(2.0 * C, -(1.0 - r) / rho * S);
  s.N_t = cplx((3.0 * r - 1.0) * C, rho * (1.0 + r) * S);
  // On (0, T], q^2 - 4 = -(4 + sigma^2) S^2 - 4 i sigma C S lies in the closed
  // lower half plane; the branch continuous up to Delta(T) = i(1+r)/rho is
  // minus the principal root taken from below the cut.
  const cplx w = s.q_t * s.q_t - 4.0;
  s.Delta = -std::sqrt(cplx(w.real(), -std::abs(w.imag())));
  s.alpha1 = 0.5 * pb * (s.q_t - s.Delta);
  s.alpha2 = 0.5 * pb * (s.q_t + s.Delta);
  if (t > 0.0) {
    const cplx gap = s.alpha1 - s.alpha2;
    s.B1 = a * (s.N_t * s.alpha1 - (1.0 + r) * pb) / gap;
    s.B2 = a * ((1.0 + r) * pb - s.N_t * s.alpha2) / gap;
    s.has_residues = true;
  }
  return s;
}

/// Core solution v(t, z) for m = 0.
inline cplx core_value(const FiniteGapData &d, double t, cplx z) {
  const PoleState s = pole_state(d, t);
  const double r = d.r;
  const cplx pb = std::conj(d.p);
  const cplx a = d.effective_a();
  const cplx zeta = z * std::polar(1.0, -s.Theta);
  const cplx denom = 1.0 - pb * s.q_t * zeta + pb * pb * zeta * zeta;
  return a * d.p + a * zeta * (s.N_t - (1.0 + r) * pb * zeta) / denom;
}

/// u^{(m)}(t, z) = e^{-i m^2 t} z^m v(t, e^{-2imt} z).
inline cplx galilean_shift(const std::function<cplx(double, cplx)> &core, int m,
                           double t, cplx z) {
  if (std::abs(z) > 1.0 + 1e-15)
    throw DomainError("galilean_shift: |z| > 1");
  const double mm = double(m);
  return std::polar(1.0, -mm * mm * t) * std::pow(z, m) *
         core(t, z * std::polar(1.0, -2.0 * mm * t));
}

/// Coefficients of the shifted solution from the core coefficients v_n:
/// u_{n+m} = e^{-i(m^2 + 2mn)t} v_n. The truncation grows by m.
inline HardyCoeffs galilean_shift_coeffs(const HardyCoeffs &core, int m,
                                         double t) {
  const int N = core.truncation();
  CVector v = CVector::Zero(N + m + 1);
  const double mm = double(m);
  for (int n = 0; n <= N; ++n)
    v[n + m] = std::polar(1.0, -(mm * mm + 2.0 * mm * n) * t) * core[n];
  return HardyCoeffs(std::move(v));
}

inline cplx closed_form_value(const FiniteGapData &d, double t, cplx z) {
  detail::require_resonant(d, "closed_form_value");
  if (!(t >= 0.0 && t < blowup_time(d.p)))
    throw PreconditionError("closed_form_value: need 0 <= t < T");
  if (std::abs(z) > 1.0 + 1e-15)
    throw DomainError("closed_form_value: |z| > 1");
  return galilean_shift([&](double tt, cplx zz) { return core_value(d, tt, zz); },
                        d.m, t, z);
}

/// Number of modes after which |alpha1|^n < 1e-14, capped at 2^20.
inline int adaptive_truncation(const FiniteGapData &d, double t) {
  const PoleState s = pole_state(d, t);
  const double lead = std::max(std::abs(s.alpha1), std::abs(s.alpha2));
  const double n = std::ceil(std::log(1e-14) / std::log(lead));
  constexpr double cap = double(1 << 20);
  return int(std::min(n, cap)) + d.m;
}

namespace detail {
// Taylor coefficients of the core solution by the recurrence of
// (numerator) / D_t. Used when the poles are (nearly) double.
inline CVector core_coeffs_direct(const FiniteGapData &d, const PoleState &s,
                                  int count) {
  const double r = d.r;
  const cplx pb = std::conj(d.p);
  const cplx a = d.effective_a();
  const cplx rot = std::polar(1.0, -s.Theta);
  // In zeta: a zeta (N - (1+r) pb zeta) / (1 - d1 zeta + d2 zeta^2).
  const cplx d1 = pb * s.q_t, d2 = pb * pb;
  CVector g = CVector::Zero(count);
  cplx prev1 = 0.0, prev2 = 0.0, rotn = 1.0;
  for (int n = 0; n < count; ++n) {
    cplx num = 0.0;
    if (n == 1)
      num = a * s.N_t;
    else if (n == 2)
      num = -a * (1.0 + r) * pb;
    const cplx cn = num + d1 * prev1 - d2 * prev2;
    g[n] = cn * rotn;
    prev2 = prev1;
    prev1 = cn;
    rotn *= rot;
  }
  g[0] = a * d.p;
  return g;
}

inline CVector core_coeffs_partial_fractions(const FiniteGapData &d,
                                             const PoleState &s, int count) {
  const cplx rot = std::polar(1.0, -s.Theta);
  const cplx z1 = s.alpha1 * rot, z2 = s.alpha2 * rot;
  CVector g = CVector::Zero(count);
  g[0] = d.effective_a() * d.p;
  cplx w1 = s.B1 * rot, w2 = s.B2 * rot;
  for (int n = 1; n < count; ++n) {
    g[n] = w1 + w2;
    w1 *= z1;
    w2 *= z2;
  }
  return g;
}

inline bool poles_well_separated(const PoleState &s) {
  return s.has_residues && std::abs(s.alpha1 - s.alpha2) > 1e-4;
}
} // namespace detail

/// Coefficients 0..N of the solution at time t in [0, T). Pass N <= 0 to use
/// adaptive_truncation.
inline HardyCoeffs solution_coeffs(const FiniteGapData &d, double t,
                                   int truncation = 0) {
  detail::require_resonant(d, "solution_coeffs");
  if (!(t >= 0.0 && t < blowup_time(d.p)))
    throw PreconditionError("solution_coeffs: need 0 <= t < T");
  const int N = truncation > 0 ? truncation : adaptive_truncation(d, t);
  const PoleState s = pole_state(d, t);
  const int count = std::max(N - d.m + 1, 0);
  CVector core = detail::poles_well_separated(s)
                     ? detail::core_coeffs_partial_fractions(d, s, count)
                     : detail::core_coeffs_direct(d, s, count);
  CVector out = CVector::Zero(N + 1);
  const double mm = double(d.m);
  for (int n = 0; n < count; ++n)
    out[n + d.m] = std::polar(1.0, -(mm * mm + 2.0 * mm * n) * t) * core[n];
  return HardyCoeffs(std::move(out));
}

/// One-pole profile left behind at the blow-up time,
/// u_{*,m}(z) = e^{-i m^2 T} z^m v_*(e^{-2imT} z),
/// v_*(z) = constant_term + residue z / (1 - pole_param z).
struct LimitProfile {
  int m = 0;
  cplx constant_term;
  cplx residue;
  cplx pole_param;
  double Theta_star = 0.0;
  double T = 0.0;

  /// ||u_{*,m}||^2, exact.
  double mass() const {
    return std::norm(constant_term) +
           std::norm(residue) / (1.0 - std::norm(pole_param));
  }

  cplx core_value(cplx z) const {
    return constant_term + residue * z / (1.0 - pole_param * z);
  }

  cplx value(cplx z) const {
    const double mm = double(m);
    return std::polar(1.0, -mm * mm * T) * std::pow(z, m) *
           core_value(z * std::polar(1.0, -2.0 * mm * T));
  }

  HardyCoeffs coeffs(int truncation) const {
    const int count = std::max(truncation - m + 1, 0);
    CVector core = CVector::Zero(std::max(count, 1));
    if (count > 0)
      core[0] = constant_term;
    cplx w = residue;
    for (int n = 1; n < count; ++n, w *= pole_param)
      core[n] = w;
    CVector out = CVector::Zero(truncation + 1);
    const double mm = double(m);
    for (int n = 0; n < count; ++n)
      out[n + m] = std::polar(1.0, -(mm * mm + 2.0 * mm * n) * T) * core[n];
    return HardyCoeffs(std::move(out));
  }
};

inline LimitProfile limit_profile(const FiniteGapData &d) {
  detail::require_resonant(d, "limit_profile");
  const double r = d.r, rho = d.rho;
  const cplx a = d.effective_a();
  LimitProfile prof;
  prof.m = d.m;
  prof.Theta_star = (1.0 + r) * pi / (4.0 * rho);
  prof.T = blowup_time(d.p);
  const cplx rot = std::polar(1.0, -prof.Theta_star);
  prof.constant_term = a * d.p;
  prof.residue = cplx(0.0, 1.0) * a * rho * (1.0 + r) * rot;
  prof.pole_param = cplx(0.0, 1.0) * rho * std::conj(d.p) * rot;
  return prof;
}

/// Pole parameter and coefficient of the singular term beta_m z/(1 - alpha_m z)
/// for the shifted solution, defined near T.
inline std::pair<cplx, cplx> shifted_pole(const FiniteGapData &d, double t) {
  const PoleState s = pole_state(d, t);
  const double mm = double(d.m);
  const cplx rot = std::polar(1.0, -s.Theta);
  const cplx alpha0 = s.alpha1 * rot, beta0 = s.B1 * rot;
  const cplx alpha_m = std::polar(1.0, -2.0 * mm * t) * alpha0;
  const cplx beta_tilde = std::polar(1.0, -(mm * mm + 2.0 * mm) * t) * beta0;
  return {alpha_m, beta_tilde * std::pow(alpha_m, -d.m)};
}

/// ((1 - |alpha_m|^2)/(T-t)^2, |beta_m|^2/(T-t)^2); both tend to c0 as t -> T.
inline std::pair<double, double> pole_asymptotics(const FiniteGapData &d,
                                                  double t) {
  const double T = blowup_time(d.p);
  if (!(t > 0.0 && t < T))
    throw PreconditionError("pole_asymptotics: need 0 < t < T");
  const auto [alpha_m, beta_m] = shifted_pole(d, t);
  const double gap2 = (T - t) * (T - t);
  return {(1.0 - std::norm(alpha_m)) / gap2, std::norm(beta_m) / gap2};
}

namespace detail {
// sum_{n >= 1} (1 + (n+m)^2)^s q^{n-1} for q close to 1: exact terms up to
// K-1, then Euler-Maclaurin from K with the integral done by exp-sinh
// quadrature after the substitution x = K + y / lambda.
inline double weighted_geometric_sum(double one_minus_q, double s, int m) {
  const double lambda = -std::log1p(-one_minus_q);
  auto w = [&](double x) { return std::pow(1.0 + (x + m) * (x + m), s); };
  constexpr int K = 4096;
  double head = 0.0;
  for (int n = 1; n < K; ++n)
    head += w(n) * std::exp(-lambda * (n - 1));
  const double fK = w(K) * std::exp(-lambda * (K - 1));
  const double dfK =
      fK * (2.0 * s * (K + m) / (1.0 + (K + m) * (K + m)) - lambda);
  boost::math::quadrature::exp_sinh<double> integrator;
  const double scaled = integrator.integrate(
      [&](double y) {
        const double x = K + y / lambda + m;
        return std::exp(s * std::log1p(x * x) - y);
      });
  const double integral = std::exp(-lambda * (K - 1)) / lambda * scaled;
  return head + integral + 0.5 * fK - dfK / 12.0;
}
} // namespace detail

/// H^s norm of the exact solution at 0 < t < T by series summation.
inline double hs_norm_closed(const FiniteGapData &d, double t, double s) {
  detail::require_resonant(d, "hs_norm_closed");
  if (s < 0.0)
    throw DomainError("hs_norm_closed: s must be non-negative");
  const double T = blowup_time(d.p);
  if (!(t > 0.0 && t < T))
    throw PreconditionError("hs_norm_closed: need 0 < t < T");
  const PoleState ps = pole_state(d, t);
  const int m = d.m;
  auto weight = [&](double n) { return std::pow(1.0 + (n + m) * (n + m), s); };
  const double one_minus_q1 = 1.0 - std::norm(ps.alpha1);

  if (one_minus_q1 > 1e-3 || !detail::poles_well_separated(ps)) {
    // Coefficients decay fast: sum them until the remainder is negligible.
    int N = 512;
    for (;;) {
      const HardyCoeffs c = solution_coeffs(d, t, N + m);
      double total = 0.0, tail = 0.0;
      for (int n = 0; n <= N + m; ++n) {
        const double term = std::pow(1.0 + double(n) * n, s) * std::norm(c[n]);
        total += term;
        if (n > N + m - 64)
          tail += term;
      }
      if (tail <= 1e-14 * total || N >= (1 << 22))
        return std::sqrt(total);
      N *= 4;
    }
  }

  // Near blow-up: |v_n|^2 = |B1 a1^{n-1} + B2 a2^{n-1}|^2 for n >= 1. Both
  // |B1|^2 and 1 - |a1|^2 vanish at T and lose relative precision, so their
  // ratio is taken from mass conservation: mass = fast part at s = 0 plus
  // |B1|^2 / (1 - |a1|^2).
  const double q2 = std::norm(ps.alpha2);
  const cplx cross = ps.alpha1 * std::conj(ps.alpha2);
  const double mean2 = std::norm(d.effective_a() * d.p);
  double fast = weight(0) * mean2, fast0 = mean2;
  cplx cross_pow = 1.0;
  double q2_pow = 1.0;
  for (int n = 1;; ++n) {
    const double term = std::norm(ps.B2) * q2_pow +
                        2.0 * (ps.B1 * std::conj(ps.B2) * cross_pow).real();
    fast += weight(n) * term;
    fast0 += term;
    if (weight(n) * q2_pow < 1e-18 && n > 16)
      break;
    q2_pow *= q2;
    cross_pow *= cross;
  }
  const double ratio = std::max(initial_mass_resonant(d.p) - fast0, 0.0);
  const double slow = ratio * one_minus_q1 *
                      detail::weighted_geometric_sum(one_minus_q1, s, m);
  return std::sqrt(fast + slow);
}

} // namespace cslab
