#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "moc/dynamics.hpp"

namespace moc {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 7;
  int gradient_samples = 1000;
  int basis_samples = 10000;
  int modulation_samples = 1000;
  int scenarios = 500;
  int max_steps = 5000;
};

/// Random avoid-mode scenario: 1-4 pairwise disjoint obstacles (bounding
/// balls separated), a linear attractor, and one start outside every obstacle
/// placed behind one of them as seen from the goal.
Scenario random_scenario(std::mt19937_64& rng, int dim, Method method);

CheckResult check_gradients(const VerifyOptions& opt);
CheckResult check_orthogonality(const VerifyOptions& opt);
CheckResult check_modulation_forms(const VerifyOptions& opt);
CheckResult check_impenetrability(const VerifyOptions& opt);
CheckResult check_determinism(const VerifyOptions& opt);

std::vector<CheckResult> run_invariant_suite(const VerifyOptions& opt = {});

}  // namespace moc
