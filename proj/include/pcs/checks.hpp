#pragma once

#include <string>
#include <vector>

#include "pcs/rod.hpp"

namespace pcs {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst observed discrepancy
  double tolerance = 0.0;
};

/// Numerical self-checks of the library against independent oracles
/// (matrix exponential, finite differences, quadrature, analytic arcs) on
/// random states of the given rod. Deterministic for a fixed seed.
std::vector<CheckResult> run_invariant_checks(const RodSpec& rod, int quadrature_nodes,
                                              unsigned seed = 7);

}  // namespace pcs
