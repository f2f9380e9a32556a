// Runs the ten acceptance criteria at their pinned parameters and prints one
// PASS/FAIL line per criterion followed by the individual checks.

#include <iostream>

#include "cslab/app/acceptance.hpp"

int main() {
  using namespace cslab::app;
  const AcceptanceOptions opt; // N = 256 cross-engine, N = 128 and dt = 1e-4 oracle
  const auto results = run_acceptance(opt);
  print_summary(std::cout, results);
  std::size_t failed = 0;
  for (const auto &r : results)
    failed += r.pass() ? 0 : 1;
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
