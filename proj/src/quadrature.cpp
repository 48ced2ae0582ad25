#include "nlslab/quadrature.hpp"

#include <cmath>

#include "nlslab/errors.hpp"

namespace nlslab {

std::vector<double> simpson_weights(std::size_t n_values, double h) {
  if (n_values == 0) return {};
  std::vector<double> w(n_values, 0.0);
  if (n_values == 1) return w;
  if (n_values == 2) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  std::size_t intervals = n_values - 1;
  std::size_t simpson_end = n_values;  // one past the last Simpson sample
  if (intervals % 2 == 1) {
    // close with a 3/8 block over the final three intervals
    simpson_end = n_values - 3;
    const double c = 3.0 * h / 8.0;
    w[n_values - 4] += c;
    w[n_values - 3] += 3.0 * c;
    w[n_values - 2] += 3.0 * c;
    w[n_values - 1] += c;
    if (simpson_end == 1) return w;  // exactly three intervals total
  }
  const double c = h / 3.0;
  w[0] += c;
  w[simpson_end - 1] += c;
  for (std::size_t j = 1; j + 1 < simpson_end; ++j) w[j] += (j % 2 == 1) ? 4.0 * c : 2.0 * c;
  return w;
}

double integrate_uniform(const std::vector<double>& f, double h) {
  const auto w = simpson_weights(f.size(), h);
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) acc += w[j] * f[j];
  return acc;
}

void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n == 0) throw precondition_error("gauss_legendre: n must be positive");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

namespace {

// 6-point Gauss rule, cached.
const std::vector<double>& gauss6_nodes() {
  static std::vector<double> n, w;
  if (n.empty()) gauss_legendre(6, n, w);
  return n;
}
const std::vector<double>& gauss6_weights() {
  static std::vector<double> n, w;
  if (w.empty()) gauss_legendre(6, n, w);
  return w;
}

}  // namespace

WeightedQuadrature::WeightedQuadrature(const RadialGrid& grid, double nu) {
  if (!(nu > -1.0)) throw precondition_error("WeightedQuadrature: nu must be > -1");
  const std::size_t n_ext = grid.n_points + 2;  // {0, r_1..r_n, r_max}
  const double h = grid.spacing;
  weights_.assign(n_ext, 0.0);

  // First cell [0, h]: integrate r^nu against the cubic through nodes
  // {0, h, 2h, 3h} exactly by expanding the Lagrange basis in monomials.
  {
    // L_i(r) = sum_q c[i][q] (r/h)^q over the stencil t = 0, 1, 2, 3
    static const double c[4][4] = {
        {1.0, -11.0 / 6.0, 1.0, -1.0 / 6.0},
        {0.0, 3.0, -2.5, 0.5},
        {0.0, -1.5, 2.0, -0.5},
        {0.0, 1.0 / 3.0, -0.5, 1.0 / 6.0},
    };
    for (int i = 0; i < 4; ++i) {
      double acc = 0.0;
      for (int q = 0; q < 4; ++q)
        acc += c[i][q] / (nu + static_cast<double>(q) + 1.0);
      // integral_0^h r^nu (r/h)^q dr = h^{nu+1} / (nu+q+1)
      weights_[static_cast<std::size_t>(i)] += std::pow(h, nu + 1.0) * acc;
    }
  }

  // Remaining cells: the weight r^nu is analytic there; 6-point Gauss on the
  // product (cubic Lagrange basis) x r^nu is exact to ~1e-15.
  const auto& gx = gauss6_nodes();
  const auto& gw = gauss6_weights();
  const long last = static_cast<long>(n_ext) - 1;
  for (long cell = 1; cell < last; ++cell) {
    long lo = cell - 1;
    if (lo > last - 3) lo = last - 3;
    const double x0 = static_cast<double>(cell) * h;
    for (std::size_t q = 0; q < gx.size(); ++q) {
      const double r = x0 + 0.5 * h * (gx[q] + 1.0);
      const double wq = 0.5 * h * gw[q] * std::pow(r, nu);
      for (long i = lo; i < lo + 4; ++i) {
        double basis = 1.0;
        for (long m = lo; m < lo + 4; ++m) {
          if (m == i) continue;
          basis *= (r - static_cast<double>(m) * h) / (static_cast<double>(i - m) * h);
        }
        weights_[static_cast<std::size_t>(i)] += wq * basis;
      }
    }
  }
}

double WeightedQuadrature::integrate(const std::vector<double>& f) const {
  if (f.size() != weights_.size())
    throw precondition_error("WeightedQuadrature::integrate: expected " +
                             std::to_string(weights_.size()) + " values, got " +
                             std::to_string(f.size()));
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) acc += weights_[j] * f[j];
  return acc;
}

double integrate_tail(const RadialGrid& grid, const std::vector<double>& f_extended,
                      double radius) {
  const std::size_t n_ext = grid.n_points + 2;
  if (f_extended.size() != n_ext)
    throw precondition_error("integrate_tail: wrong sample count");
  if (radius >= grid.r_max) return 0.0;
  if (radius < 0.0) radius = 0.0;
  const double h = grid.spacing;
  const long last = static_cast<long>(n_ext) - 1;
  const auto& gx = gauss6_nodes();
  const auto& gw = gauss6_weights();
  double acc = 0.0;
  long first_cell = static_cast<long>(std::floor(radius / h));
  if (first_cell > last - 1) first_cell = last - 1;
  for (long cell = first_cell; cell < last; ++cell) {
    const double a = std::max(radius, static_cast<double>(cell) * h);
    const double b = static_cast<double>(cell + 1) * h;
    if (b <= a) continue;
    long lo = cell - 1;
    if (lo < 0) lo = 0;
    if (lo > last - 3) lo = last - 3;
    for (std::size_t q = 0; q < gx.size(); ++q) {
      const double r = 0.5 * (a + b) + 0.5 * (b - a) * gx[q];
      double val = 0.0;
      for (long i = lo; i < lo + 4; ++i) {
        double basis = 1.0;
        for (long m = lo; m < lo + 4; ++m) {
          if (m == i) continue;
          basis *= (r - static_cast<double>(m) * h) / (static_cast<double>(i - m) * h);
        }
        val += basis * f_extended[static_cast<std::size_t>(i)];
      }
      acc += 0.5 * (b - a) * gw[q] * val;
    }
  }
  return acc;
}

}  // namespace nlslab
