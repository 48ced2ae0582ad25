#include "nlslab/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "nlslab/quadrature.hpp"

namespace nlslab {

RadialGrid make_radial_grid(double r_max, std::size_t n_points) {
  if (!(r_max > 0.0) || !std::isfinite(r_max))
    throw config_error("make_radial_grid: r_max must be positive and finite");
  if (n_points < 4) throw config_error("make_radial_grid: n_points must be >= 4");
  RadialGrid g;
  g.r_max = r_max;
  g.n_points = n_points;
  g.spacing = r_max / static_cast<double>(n_points + 1);
  g.nodes.resize(n_points);
  for (std::size_t j = 0; j < n_points; ++j)
    g.nodes[j] = static_cast<double>(j + 1) * g.spacing;
  return g;
}

RadialField zero_field(std::shared_ptr<const RadialGrid> grid, std::string label) {
  RadialField f;
  f.grid = std::move(grid);
  f.values.assign(f.grid->n_points, {0.0, 0.0});
  f.label = std::move(label);
  return f;
}

RadialField gaussian_profile(std::shared_ptr<const RadialGrid> grid, double amplitude,
                             double width, std::string label) {
  if (!(width > 0.0)) throw config_error("gaussian_profile: width must be positive");
  RadialField f = zero_field(std::move(grid), std::move(label));
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double r = f.grid->nodes[j] / width;
    f.values[j] = amplitude * std::exp(-0.5 * r * r);
  }
  return f;
}

RadialField sech_profile(std::shared_ptr<const RadialGrid> grid, double amplitude,
                         double width, std::string label) {
  if (!(width > 0.0)) throw config_error("sech_profile: width must be positive");
  RadialField f = zero_field(std::move(grid), std::move(label));
  for (std::size_t j = 0; j < f.size(); ++j)
    f.values[j] = amplitude / std::cosh(f.grid->nodes[j] / width);
  return f;
}

RadialField random_bump_profile(std::shared_ptr<const RadialGrid> grid, double amplitude,
                                std::uint64_t seed, std::string label) {
  RadialField f = zero_field(std::move(grid), std::move(label));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp_dist(0.3, 1.0);
  std::uniform_real_distribution<double> width_dist(0.6, 2.0);
  double amps[3], widths[3];
  for (int b = 0; b < 3; ++b) {
    amps[b] = amp_dist(rng);
    widths[b] = width_dist(rng);
  }
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double r = f.grid->nodes[j];
    double v = 0.0;
    for (int b = 0; b < 3; ++b) {
      const double s = r / widths[b];
      v += amps[b] * std::exp(-0.5 * s * s);
    }
    f.values[j] = v;
  }
  // L2-normalize (3d measure), then rescale by the requested amplitude.
  std::vector<double> sq(f.size() + 2, 0.0);
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double r = f.grid->nodes[j];
    sq[j + 1] = r * r * std::norm(f.values[j]);
  }
  const double mass = 4.0 * M_PI * integrate_uniform(sq, f.grid->spacing);
  const double scale = amplitude / std::sqrt(mass);
  for (auto& v : f.values) v *= scale;
  return f;
}

RadialField scale_field(const RadialField& f, std::complex<double> factor) {
  RadialField out = f;
  for (auto& v : out.values) v *= factor;
  return out;
}

namespace {

// Cubic Lagrange interpolation of the profile at radius r, using the extended
// sample set {0, r_1..r_n, r_max} with cubic extrapolation at the origin and
// Dirichlet zero at r_max. Zero beyond r_max.
std::complex<double> interpolate(const RadialField& f, double r) {
  const RadialGrid& g = *f.grid;
  if (r >= g.r_max) return {0.0, 0.0};
  if (r < 0.0) r = -r;  // radial profiles are even
  const double h = g.spacing;
  const std::size_t n = g.n_points;
  auto value_at = [&](long idx) -> std::complex<double> {
    if (idx == 0)
      return 3.0 * f.values[0] - 3.0 * f.values[1] + f.values[2];
    if (idx >= 1 && static_cast<std::size_t>(idx) <= n) return f.values[idx - 1];
    return {0.0, 0.0};  // r_max and beyond
  };
  long cell = static_cast<long>(std::floor(r / h));  // nodes at idx*h, idx = 0..n+1
  long lo = cell - 1;
  if (lo < 0) lo = 0;
  if (lo > static_cast<long>(n + 1) - 3) lo = static_cast<long>(n + 1) - 3;
  std::complex<double> acc{0.0, 0.0};
  for (long i = lo; i < lo + 4; ++i) {
    double w = 1.0;
    for (long m = lo; m < lo + 4; ++m) {
      if (m == i) continue;
      w *= (r - static_cast<double>(m) * h) / (static_cast<double>(i - m) * h);
    }
    acc += w * value_at(i);
  }
  return acc;
}

}  // namespace

RadialField rescale_field(const RadialField& f, double a, double b, double lambda) {
  RadialField out = zero_field(f.grid, f.label);
  const double amp = std::exp(a * lambda);
  const double stretch = std::exp(-b * lambda);
  for (std::size_t j = 0; j < out.size(); ++j)
    out.values[j] = amp * interpolate(f, stretch * f.grid->nodes[j]);
  return out;
}

void throw_if_not_finite(const RadialField& f) {
  for (const auto& v : f.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw numerical_error("field '" + f.label + "' contains non-finite values");
}

void write_field_csv(const RadialField& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open '" + path + "' for writing");
  out << "r,re,im\n";
  char line[128];
  for (std::size_t j = 0; j < f.size(); ++j) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", f.grid->nodes[j],
                  f.values[j].real(), f.values[j].imag());
    out << line;
  }
}

RadialField read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open '" + path + "'");
  std::string header;
  if (!std::getline(in, header) || header != "r,re,im")
    throw data_error("'" + path + "': expected header r,re,im");
  std::vector<double> rs;
  std::vector<std::complex<double>> vals;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double r, re, im;
    if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &r, &re, &im) != 3)
      throw data_error("'" + path + "': malformed row '" + line + "'");
    rs.push_back(r);
    vals.push_back({re, im});
  }
  if (rs.size() < 8) throw data_error("'" + path + "': too few rows");
  const double h = rs[0];
  for (std::size_t j = 0; j < rs.size(); ++j)
    if (std::abs(rs[j] - static_cast<double>(j + 1) * h) > 1e-9 * (1.0 + rs[j]))
      throw data_error("'" + path + "': nodes are not a uniform radial grid");
  const double r_max = static_cast<double>(rs.size() + 1) * h;
  auto grid = std::make_shared<RadialGrid>(make_radial_grid(r_max, rs.size()));
  RadialField f;
  f.grid = std::move(grid);
  f.values = std::move(vals);
  f.label = path;
  return f;
}

}  // namespace nlslab
