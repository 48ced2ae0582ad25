#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "nlslab/errors.hpp"

namespace nlslab {

/// Uniform radial grid on (0, r_max). The origin and the truncation radius
/// carry homogeneous Dirichlet values for w(r) = r*u(r) and are not stored:
/// nodes are r_j = j*h, j = 1..n_points, with h = r_max/(n_points+1).
struct RadialGrid {
  double r_max = 0.0;
  std::size_t n_points = 0;
  double spacing = 0.0;
  std::vector<double> nodes;

  bool operator==(const RadialGrid& other) const {
    return r_max == other.r_max && n_points == other.n_points;
  }
};

RadialGrid make_radial_grid(double r_max, std::size_t n_points);

/// Complex radial profile u(r) sampled on a grid. Immutable by convention:
/// operations return fresh fields.
struct RadialField {
  std::shared_ptr<const RadialGrid> grid;
  std::vector<std::complex<double>> values;
  std::string label;

  std::size_t size() const { return values.size(); }
};

RadialField zero_field(std::shared_ptr<const RadialGrid> grid, std::string label = "zero");
RadialField gaussian_profile(std::shared_ptr<const RadialGrid> grid, double amplitude,
                             double width, std::string label = "gaussian");
RadialField sech_profile(std::shared_ptr<const RadialGrid> grid, double amplitude,
                         double width, std::string label = "sech");
/// Sum of three Gaussians with seeded random widths/amplitudes, L2-normalized
/// then rescaled by `amplitude`.
RadialField random_bump_profile(std::shared_ptr<const RadialGrid> grid, double amplitude,
                                std::uint64_t seed, std::string label = "random_bump");

RadialField scale_field(const RadialField& f, std::complex<double> factor);
/// Exact resampling of the scaling family e^{a*lambda} u(e^{-b*lambda} r)
/// onto the same grid (values outside the original support evaluate the
/// analytic profile only for fields created by the factories above; for
/// general fields linear interpolation with zero extension is used).
RadialField rescale_field(const RadialField& f, double a, double b, double lambda);

void throw_if_not_finite(const RadialField& f);

/// CSV with header `r,re,im`, one row per node.
void write_field_csv(const RadialField& f, const std::string& path);
RadialField read_field_csv(const std::string& path);

}  // namespace nlslab
