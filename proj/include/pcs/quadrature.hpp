#pragma once

#include <vector>

namespace pcs {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int order);

  int order() const { return static_cast<int>(nodes.size()); }

  // Node i mapped to [a, b] and its scaled weight.
  double node(int i, double a, double b) const {
    return 0.5 * (a + b) + 0.5 * (b - a) * nodes[i];
  }
  double weight(int i, double a, double b) const {
    return 0.5 * (b - a) * weights[i];
  }
};

}  // namespace pcs
