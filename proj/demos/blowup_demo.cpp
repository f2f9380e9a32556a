// Prints the H^1 norm of the resonant solution as t approaches the blow-up
// time, next to the predicted rate, and the one unit of mass left behind.

#include <cmath>
#include <cstdio>

#include "cslab/closed_form.hpp"

int main() {
  using namespace cslab;
  const FiniteGapData d = make_resonant(0.0, 0, 0.5);
  const double T = blowup_time(d.p);
  std::printf("p = 0.5, T = %.10f, c0 = %.6f\n", T, pole_constant(d.p));
  std::printf("%10s %14s %14s %12s\n", "T - t", "||u||_H1", "rate*(T-t)^-2", "|alpha1|");
  for (double gap = 0.1; gap > 5e-5; gap /= 10.0) {
    const double t = T - gap;
    std::printf("%10.1e %14.6e %14.6e %12.9f\n", gap, hs_norm_closed(d, t, 1.0),
                hs_rate_constant(d.p, 1.0) / (gap * gap), std::abs(pole_state(d, t).alpha1));
  }
  const LimitProfile prof = limit_profile(d);
  std::printf("||u0||^2 = %.12f, ||u*||^2 = %.12f, defect = %.12f\n",
              initial_mass_resonant(d.p), prof.mass(), initial_mass_resonant(d.p) - prof.mass());
}
