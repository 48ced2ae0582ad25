#pragma once

#include <cmath>

#include "nlslab/errors.hpp"

namespace nlslab {

/// Repulsive inverse-power potential V(r) = k / r^alpha.
/// Homogeneity gives x.grad(V) = -alpha * V exactly, which is used wherever
/// V-moments appear instead of differentiating V numerically.
struct PotentialSpec {
  double k = 0.0;
  double alpha = 1.5;

  PotentialSpec() = default;
  PotentialSpec(double k_, double alpha_) : k(k_), alpha(alpha_) { validate(); }

  void validate() const {
    if (!(k >= 0.0)) throw config_error("PotentialSpec: k must be >= 0");
    if (!(alpha > 1.0 && alpha <= 2.0))
      throw config_error("PotentialSpec: alpha must lie in (1, 2]");
  }

  double value(double r) const { return k * std::pow(r, -alpha); }
};

}  // namespace nlslab
