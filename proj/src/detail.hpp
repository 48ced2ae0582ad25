#pragma once

// Internal helpers shared by the analysis translation units.

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "nlslab/grid.hpp"
#include "nlslab/quadrature.hpp"
#include "nlslab/sine_transform.hpp"

namespace nlslab::detail {

// Product-quadrature and transform instances keyed by grid geometry; both are
// immutable after construction, so sharing across threads is safe.
std::shared_ptr<const WeightedQuadrature> cached_quadrature(const RadialGrid& grid, double nu);
std::shared_ptr<const SineTransform> cached_transform(const RadialGrid& grid);

// Extended sample set {0, r_1..r_n, r_max} of |u|^p, with the origin value
// from cubic extrapolation u(0) ~ 3u_1 - 3u_2 + u_3 and Dirichlet zero at
// r_max.
std::vector<double> extended_abs_pow(const RadialField& f, double p);
std::complex<double> origin_value(const RadialField& f);

// Spectral radial derivative u'(r_j) at the interior nodes, computed from
// w = r*u via u' = (w' - u)/r.
std::vector<std::complex<double>> radial_derivative(const RadialField& f);

}  // namespace nlslab::detail
