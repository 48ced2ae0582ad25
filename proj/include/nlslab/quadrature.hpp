#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "nlslab/grid.hpp"

namespace nlslab {

/// Composite Simpson weights for a uniform grid of `n_values` samples
/// (spacing h), with a 3/8 block at the end when the interval count is odd.
std::vector<double> simpson_weights(std::size_t n_values, double h);

/// Integral of samples f_0..f_{n-1} on a uniform grid of spacing h.
double integrate_uniform(const std::vector<double>& f, double h);

/// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration on
/// the Legendre polynomial.
void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights);

/// Product-integration weights for integral( r^nu * f(r), r = 0..r_max ) on
/// the extended grid {0, h, ..., r_max}: each cell integrates the local cubic
/// interpolant against the weight r^nu exactly, so smooth f gives 4th-order
/// accuracy even for fractional nu. Requires nu > -1 (the singular moment
/// kernels handle the first cell separately).
class WeightedQuadrature {
 public:
  WeightedQuadrature(const RadialGrid& grid, double nu);

  /// f must hold the n_points+2 values at {0, r_1..r_n, r_max}.
  double integrate(const std::vector<double>& f) const;

  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

/// Cumulative integral of |samples|^2-style data from `radius` to r_max with
/// 4th-order partial-cell handling.
double integrate_tail(const RadialGrid& grid, const std::vector<double>& f_extended,
                      double radius);

}  // namespace nlslab
