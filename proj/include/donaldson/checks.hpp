#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "donaldson/metric.hpp"

namespace donaldson {

struct CheckResult {
  std::string name;
  double residual = 0.0;   // worst case over all samples
  double tolerance = 0.0;
  bool pass = false;
};

struct CheckOptions {
  int grid_n = 8;
  std::uint64_t seed = 42;
  int samples = 3;
  // Size of the perturbation of w_std used for the spectral identities.
  // Product-rule identities hold up to aliasing of non-polynomial
  // coefficients such as 1/u, which grows like amplitude^4; 1e-3 keeps it
  // below round-off at grid_n = 8.
  double amplitude = 1e-3;
  SolverOptions solver{};
};

/// Runs the invariant suite of every module on seeded random data.
/// Deterministic for fixed options.
std::vector<CheckResult> run_checks(const CheckOptions& opts);

/// One line per check: name, residual, tolerance, PASS/FAIL.
void write_check_report(std::span<const CheckResult> results, std::ostream& out);

bool all_passed(std::span<const CheckResult> results);

}  // namespace donaldson
