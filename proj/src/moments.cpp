#include "nlslab/moments.hpp"

#include <cmath>

#include "detail.hpp"
#include "nlslab/errors.hpp"
#include "nlslab/quadrature.hpp"
#include "nlslab/sine_transform.hpp"

namespace nlslab {

namespace detail {

namespace {
struct QuadKey {
  double r_max;
  std::size_t n;
  double nu;
  bool operator<(const QuadKey& o) const {
    if (r_max != o.r_max) return r_max < o.r_max;
    if (n != o.n) return n < o.n;
    return nu < o.nu;
  }
};
}  // namespace

std::shared_ptr<const WeightedQuadrature> cached_quadrature(const RadialGrid& grid, double nu) {
  static std::mutex mutex;
  static std::map<QuadKey, std::shared_ptr<const WeightedQuadrature>> cache;
  const QuadKey key{grid.r_max, grid.n_points, nu};
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto q = std::make_shared<const WeightedQuadrature>(grid, nu);
  cache.emplace(key, q);
  return q;
}

std::shared_ptr<const SineTransform> cached_transform(const RadialGrid& grid) {
  static std::mutex mutex;
  static std::map<std::pair<double, std::size_t>, std::shared_ptr<const SineTransform>> cache;
  const auto key = std::make_pair(grid.r_max, grid.n_points);
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto t = std::make_shared<const SineTransform>(grid.n_points, grid.r_max);
  cache.emplace(key, t);
  return t;
}

std::complex<double> origin_value(const RadialField& f) {
  return 3.0 * f.values[0] - 3.0 * f.values[1] + f.values[2];
}

std::vector<double> extended_abs_pow(const RadialField& f, double p) {
  const std::size_t n = f.size();
  std::vector<double> out(n + 2, 0.0);
  out[0] = std::pow(std::abs(origin_value(f)), p);
  if (p == 2.0) {
    for (std::size_t j = 0; j < n; ++j) out[j + 1] = std::norm(f.values[j]);
  } else if (p == 4.0) {
    for (std::size_t j = 0; j < n; ++j) {
      const double s = std::norm(f.values[j]);
      out[j + 1] = s * s;
    }
  } else {
    for (std::size_t j = 0; j < n; ++j) out[j + 1] = std::pow(std::abs(f.values[j]), p);
  }
  return out;
}

std::vector<std::complex<double>> radial_derivative(const RadialField& f) {
  const RadialGrid& g = *f.grid;
  const std::size_t n = f.size();
  auto transform = cached_transform(g);
  std::vector<double> wre(n), wim(n);
  for (std::size_t j = 0; j < n; ++j) {
    wre[j] = g.nodes[j] * f.values[j].real();
    wim[j] = g.nodes[j] * f.values[j].imag();
  }
  const auto dre = transform->derivative(wre);
  const auto dim = transform->derivative(wim);
  std::vector<std::complex<double>> du(n);
  for (std::size_t j = 0; j < n; ++j)
    du[j] = (std::complex<double>(dre[j], dim[j]) - f.values[j]) / g.nodes[j];
  return du;
}

}  // namespace detail

namespace {

double spectral_kinetic(const RadialField& f) {
  const RadialGrid& g = *f.grid;
  const std::size_t n = f.size();
  auto transform = detail::cached_transform(g);
  std::vector<double> wre(n), wim(n);
  for (std::size_t j = 0; j < n; ++j) {
    wre[j] = g.nodes[j] * f.values[j].real();
    wim[j] = g.nodes[j] * f.values[j].imag();
  }
  // 4 pi integral |u'|^2 r^2 dr = 4 pi integral |w'|^2 dr (Dirichlet ends)
  return 4.0 * M_PI * (transform->derivative_energy(wre) + transform->derivative_energy(wim));
}

double fd4_kinetic(const RadialField& f) {
  const RadialGrid& g = *f.grid;
  const std::size_t n = f.size();
  const double h = g.spacing;
  // w on the extended index range; odd extension through the origin,
  // Dirichlet zero at and beyond r_max.
  auto w_at = [&](long idx) -> std::complex<double> {
    if (idx > 0 && idx <= static_cast<long>(n))
      return static_cast<double>(idx) * h * f.values[idx - 1];
    if (idx < 0) {
      long m = -idx;
      if (m <= static_cast<long>(n)) return -static_cast<double>(m) * h * f.values[m - 1];
    }
    return {0.0, 0.0};
  };
  std::vector<double> integrand(n + 2, 0.0);  // r^2 |u'|^2 -> 0 at the origin
  for (std::size_t j = 1; j <= n; ++j) {
    const long i = static_cast<long>(j);
    const std::complex<double> dw =
        (8.0 * (w_at(i + 1) - w_at(i - 1)) - (w_at(i + 2) - w_at(i - 2))) / (12.0 * h);
    const double r = g.nodes[j - 1];
    // r^2 |u'|^2 = |w' - w/r|^2
    integrand[j] = std::norm(dw - f.values[j - 1]);
  }
  integrand[n + 1] = 0.0;
  return 4.0 * M_PI * detail::cached_quadrature(g, 0.0)->integrate(integrand);
}

}  // namespace

MomentSet compute_moments(const RadialField& field, const PotentialSpec& pot,
                          DerivativeScheme scheme) {
  pot.validate();
  const RadialGrid& g = *field.grid;
  if (field.size() != g.n_points) throw precondition_error("compute_moments: size mismatch");
  MomentSet m;
  const auto sq = detail::extended_abs_pow(field, 2.0);
  const auto quad2 = detail::cached_quadrature(g, 2.0);
  m.mass = 4.0 * M_PI * quad2->integrate(sq);
  m.quartic = 4.0 * M_PI * quad2->integrate(detail::extended_abs_pow(field, 4.0));
  m.kinetic =
      scheme == DerivativeScheme::Spectral ? spectral_kinetic(field) : fd4_kinetic(field);
  if (pot.k > 0.0) {
    const auto quad_v = detail::cached_quadrature(g, 2.0 - pot.alpha);
    m.v_moment = 4.0 * M_PI * pot.k * quad_v->integrate(sq);
  }
  m.xgradv_moment = -pot.alpha * m.v_moment;
  return m;
}

double quintic_moment(const RadialField& field) {
  return 4.0 * M_PI *
         detail::cached_quadrature(*field.grid, 2.0)
             ->integrate(detail::extended_abs_pow(field, 5.0));
}

double exterior_mass(const RadialField& field, double radius) {
  const RadialGrid& g = *field.grid;
  auto sq = detail::extended_abs_pow(field, 2.0);
  for (std::size_t j = 0; j < sq.size(); ++j) {
    const double r = static_cast<double>(j) * g.spacing;
    sq[j] *= r * r;
  }
  return 4.0 * M_PI * integrate_tail(g, sq, radius);
}

double offcenter_v_moment(const RadialField& field, const PotentialSpec& pot, double shift) {
  pot.validate();
  if (shift < 0.0) throw precondition_error("offcenter_v_moment: shift must be >= 0");
  if (pot.k == 0.0) return 0.0;
  const RadialGrid& g = *field.grid;
  const auto sq = detail::extended_abs_pow(field, 2.0);
  if (shift == 0.0) {
    const auto quad_v = detail::cached_quadrature(g, 2.0 - pot.alpha);
    return 4.0 * M_PI * pot.k * quad_v->integrate(sq);
  }
  // Angular factor A(s) = integral_{-1}^{1} (s^2+d^2+2sd x)^(-a/2) dx. Substituting
  // u^2 = s^2+d^2+2sd x reduces it to integral u^{1-a} du on [|s-d|, s+d], so
  //   s^2 A(s) = s/d * [(s+d)^p - |s-d|^p] / p  with p = 2 - alpha  (log for alpha = 2).
  // The |s-d|^p term has a cusp on the ring s = d (a genuine log singularity when
  // alpha = 2), so it is integrated against the cusp weight directly instead of
  // through the smooth-integrand quadrature.
  const double h = g.spacing;
  const double p = 2.0 - pot.alpha;
  const std::size_t m = sq.size();
  std::vector<double> phi(m), smooth(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double s = static_cast<double>(j) * h;
    phi[j] = s * sq[j];
    smooth[j] = pot.alpha == 2.0 ? phi[j] * std::log(s + shift)
                                 : phi[j] * std::pow(s + shift, p);
  }

  auto interp = [&](double s) {
    const double t = s / h;
    const std::size_t c = std::min<std::size_t>(m - 2, static_cast<std::size_t>(t));
    const std::size_t i0 = c == 0 ? 0 : std::min<std::size_t>(c - 1, m - 4);
    double acc = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
      double la = 1.0;
      const double xa = static_cast<double>(i0 + a) * h;
      for (std::size_t b = 0; b < 4; ++b)
        if (b != a) la *= (s - static_cast<double>(i0 + b) * h) /
                          (xa - static_cast<double>(i0 + b) * h);
      acc += phi[i0 + a] * la;
    }
    return acc;
  };
  auto cusp = [&](double s) {
    // clamp so rounding on the tiniest refinement panels cannot hit log(0)
    const double u = std::max(std::abs(s - shift), 1e-18 * (h + shift));
    return pot.alpha == 2.0 ? std::log(u) : std::pow(u, p);
  };
  std::vector<double> gx, gw;
  gauss_legendre(6, gx, gw);
  auto panel = [&](double a, double b) {
    double acc = 0.0;
    for (std::size_t q = 0; q < gx.size(); ++q) {
      const double s = 0.5 * (a + b) + 0.5 * (b - a) * gx[q];
      acc += 0.5 * (b - a) * gw[q] * interp(s) * cusp(s);
    }
    return acc;
  };
  // geometric refinement toward the singular point at s = shift
  auto toward = [&](double from, double to) {  // |to - shift| -> 0 side is `to`
    double acc = 0.0, a = from;
    for (int level = 0; level < 60 && std::abs(to - a) > 1e-16 * h; ++level) {
      const double b = 0.5 * (a + to);
      acc += panel(std::min(a, b), std::max(a, b));
      a = b;
    }
    return acc;
  };
  double cusp_integral = 0.0;
  for (std::size_t c = 0; c + 1 < m; ++c) {
    const double a = static_cast<double>(c) * h;
    const double b = static_cast<double>(c + 1) * h;
    if (shift > a && shift < b)
      cusp_integral += toward(a, shift) + toward(b, shift);
    else if (std::abs(a - shift) < 2.0 * h || std::abs(b - shift) < 2.0 * h)
      cusp_integral += shift <= a ? toward(b, a) : toward(a, b);
    else
      cusp_integral += panel(a, b);
  }

  const double smooth_integral = detail::cached_quadrature(g, 0.0)->integrate(smooth);
  const double total = pot.alpha == 2.0 ? smooth_integral - cusp_integral
                                        : (smooth_integral - cusp_integral) / p;
  return 2.0 * M_PI * pot.k * total / shift;
}

}  // namespace nlslab
