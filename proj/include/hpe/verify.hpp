#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hpe/problem.hpp"

namespace hpe {

struct VerifyConfig {
  std::uint64_t seed = 1;
  int samples = 10;
  double theta = 1.0 / 3.0;
  /// Fault to inject: "" (none), "dmu" (scaled flux), "d2mu" (scaled Hessian).
  std::string inject;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
};

/// Gradient and Hessian consistency of the discrete energy.
std::vector<CheckResult> check_derivatives(const ProblemDef& problem, std::uint64_t seed, int samples);

/// Σ_κ Ẽ'_κ(v) = E(v) for random v vanishing on the boundary.
CheckResult check_telescoping(const ProblemDef& problem, std::uint64_t seed, int samples);

/// Applies a fault to a copy of `problem`.
ProblemDef inject_fault(ProblemDef problem, const std::string& fault);

/// Runs every invariant check and prints one line each. Returns the
/// results; any failing entry means the suite failed.
std::vector<CheckResult> verify(const VerifyConfig& config, std::ostream& out);

}  // namespace hpe
