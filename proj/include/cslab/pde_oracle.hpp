#pragma once

// Direct time stepper for i u_t = -u_xx - 2 (D Pi |u|^2) u on Hardy modes 0..N.
// In coefficients u_n' = -i n^2 u_n + i NL(u)_n; the linear part is removed
// with the integrating factor e^{-i n^2 t} and the rest advanced by RK4.

#include <array>
#include <cmath>
#include <vector>

#include "cslab/lax.hpp"

namespace cslab {

/// 2 (D Pi |u|^2) u truncated to modes 0..N.
inline HardyCoeffs nonlinearity(const HardyCoeffs &u) {
  const int N = u.truncation();
  const LaurentCoeffs m2 = modulus_squared(u);
  // D Pi |u|^2: mode k >= 1 carries k * (|u|^2)_k.
  CVector w(N + 1);
  for (int k = 0; k <= N; ++k)
    w[k] = double(k) * m2.at(k);
  CVector out = CVector::Zero(N + 1);
  const CVector &c = u.values();
  for (int n = 1; n <= N; ++n) {
    cplx acc{};
    for (int k = 1; k <= n; ++k)
      acc += w[k] * c[n - k];
    out[n] = 2.0 * acc;
  }
  return HardyCoeffs(std::move(out));
}

struct OracleOptions {
  double dt = 1e-4;
  double output_stride = 0.0; // 0: record only the endpoints
  double mass_drift_limit = 1e-4;
  bool linear_only = false;
};

/// One integrating-factor RK4 step of size h starting at time t.
inline HardyCoeffs step(const HardyCoeffs &u, double h, double t = 0.0,
                        bool linear_only = false) {
  if (!(h > 0.0))
    throw PreconditionError("step: dt must be positive");
  const int N = u.truncation();
  CVector e_half(N + 1), e_full(N + 1);
  for (int n = 0; n <= N; ++n) {
    const double w = double(n) * n;
    e_half[n] = std::polar(1.0, -w * 0.5 * h);
    e_full[n] = std::polar(1.0, -w * h);
  }
  const CVector &u0 = u.values();
  if (linear_only)
    return HardyCoeffs(CVector(e_full.cwiseProduct(u0)));

  const cplx I(0.0, 1.0);
  auto F = [&](const CVector &v) -> CVector {
    if (!detail::all_finite(v))
      throw BlowupSuspected("step: non-finite state", t);
    try {
      return I * nonlinearity(HardyCoeffs(v)).values();
    } catch (const DomainError &) {
      throw BlowupSuspected("step: non-finite nonlinearity", t);
    }
  };
  const CVector k1 = F(u0);
  const CVector k2 = F(e_half.cwiseProduct(u0 + 0.5 * h * k1));
  const CVector k3 = F(e_half.cwiseProduct(u0) + 0.5 * h * k2);
  const CVector k4 = F(e_full.cwiseProduct(u0) + h * e_half.cwiseProduct(k3));
  CVector next = e_full.cwiseProduct(u0) +
                 (h / 6.0) * (e_full.cwiseProduct(k1) +
                              2.0 * e_half.cwiseProduct(k2 + k3) + k4);
  if (!detail::all_finite(next))
    throw BlowupSuspected("step: non-finite state", t + h);
  return HardyCoeffs(std::move(next));
}

struct Trajectory {
  std::vector<double> times;
  std::vector<HardyCoeffs> states;
  std::vector<std::array<double, 3>> conserved; // I0, I1, I2
};

namespace detail {
inline std::array<double, 3> conserved_triple(const HardyCoeffs &u) {
  const LaxMatrix L = build_lax_matrix(u);
  return {conserved_quantity(u, 0, L), conserved_quantity(u, 1, L),
          conserved_quantity(u, 2, L)};
}
} // namespace detail

/// Integrates with fixed steps of at most opt.dt and records the state at
/// each of the increasing `outputs` (time 0 is always recorded first). Steps
/// are shortened so that every output time is hit exactly.
inline Trajectory evolve_to_times(const HardyCoeffs &u0,
                                  const std::vector<double> &outputs,
                                  const OracleOptions &opt = {}) {
  if (!(opt.dt > 0.0))
    throw PreconditionError("evolve: dt must be positive");
  Trajectory traj;
  auto record = [&](double t, const HardyCoeffs &u) {
    traj.times.push_back(t);
    traj.states.push_back(u);
    traj.conserved.push_back(detail::conserved_triple(u));
  };
  const double mass0 = u0.values().squaredNorm();
  HardyCoeffs u = u0;
  double t = 0.0;
  record(t, u);
  for (const double target : outputs) {
    if (!(target > t)) {
      if (target == t && target == 0.0)
        continue;
      throw PreconditionError("evolve: output times must increase");
    }
    const auto steps = long(std::ceil((target - t) / opt.dt - 1e-9));
    const double h = (target - t) / double(std::max(steps, 1L));
    for (long k = 0; k < steps; ++k) {
      u = step(u, h, t, opt.linear_only);
      t += h;
      const double drift = std::abs(u.values().squaredNorm() - mass0);
      if (drift > opt.mass_drift_limit)
        throw BlowupSuspected("evolve: mass drift " + std::to_string(drift), t);
    }
    t = target;
    record(t, u);
  }
  return traj;
}

/// Output times are the multiples of opt.output_stride up to t_end, plus t_end.
inline Trajectory evolve(const HardyCoeffs &u0, double t_end,
                         const OracleOptions &opt = {}) {
  if (!(t_end > 0.0))
    throw PreconditionError("evolve: t_end must be positive");
  const double stride = opt.output_stride > 0.0 ? opt.output_stride : t_end;
  std::vector<double> outputs;
  for (long k = 1;; ++k) {
    const double t = double(k) * stride;
    if (t >= t_end * (1.0 - 1e-12))
      break;
    outputs.push_back(t);
  }
  outputs.push_back(t_end);
  return evolve_to_times(u0, outputs, opt);
}

/// evolve(u0, t_end, dt) with endpoint output only.
inline Trajectory evolve(const HardyCoeffs &u0, double t_end, double dt) {
  OracleOptions opt;
  opt.dt = dt;
  return evolve(u0, t_end, opt);
}

} // namespace cslab
