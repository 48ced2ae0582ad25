#include "nlslab/virial.hpp"

#include <cmath>

#include "detail.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/quadrature.hpp"

namespace nlslab {

namespace {

// Blend profile g(t) = phi(R(1+t))/R^2 on [0, 1]: piecewise quintic, C^3 at
// the joins and into the plateau g(1) = 2.123, with certified envelopes
// g'' <= 2, 0 <= g <= (1+t)^2, 0 <= g' <= 2(1+t), |g''''| <= 360.
double blend(double t, int d) {
  static const double p1[6] = {1.0, 2.0, 1.0, 0.0, -925.0 / 63.0, 3700.0 / 189.0};
  static const double p2[6] = {13001.0 / 14000.0, 391.0 / 140.0, -23.0 / 14.0, 0.0, 0.0, 0.0};
  static const double p3[6] = {976247.0 / 189000.0, -4600.0 / 189.0, 12650.0 / 189.0,
                               -2300.0 / 27.0,      9775.0 / 189.0,  -2300.0 / 189.0};
  const double* c = t <= 0.3 ? p1 : (t <= 0.7 ? p2 : p3);
  double acc = 0.0;
  for (int k = 5; k >= d; --k) {
    double coef = c[k];
    for (int m = 0; m < d; ++m) coef *= static_cast<double>(k - m);
    acc = acc * t + coef;
  }
  return acc;
}

// Quintic smoothstep and derivatives on [0, 1].
double smoothstep(double t, int d) {
  switch (d) {
    case 0: return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    case 1: return t * t * (30.0 + t * (-60.0 + 30.0 * t));
    case 2: return t * (60.0 + t * (-180.0 + 120.0 * t));
    case 3: return 60.0 + t * (-360.0 + 360.0 * t);
    case 4: return -360.0 + 720.0 * t;
    default: return 0.0;
  }
}

}  // namespace

double cutoff_value(CutoffKind kind, double R, double r, int derivative) {
  if (derivative < 0 || derivative > 4)
    throw precondition_error("cutoff_value: derivative order must be 0..4");
  if (kind == CutoffKind::Quadratic) {
    if (r <= R) {
      switch (derivative) {
        case 0: return r * r;
        case 1: return 2.0 * r;
        case 2: return 2.0;
        default: return 0.0;
      }
    }
    if (r >= 2.0 * R) return derivative == 0 ? 2.123 * R * R : 0.0;
    const double t = (r - R) / R;
    return std::pow(R, 2.0 - static_cast<double>(derivative)) * blend(t, derivative);
  }
  // EXTERIOR
  if (r <= 0.5 * R) return 0.0;
  if (r >= R) return derivative == 0 ? 1.0 : 0.0;
  const double t = (r - 0.5 * R) / (0.5 * R);
  return smoothstep(t, derivative) * std::pow(2.0 / R, static_cast<double>(derivative));
}

VirialCutoff build_cutoff(CutoffKind kind, double R, const RadialGrid& grid) {
  if (!(R > 0.0)) throw config_error("build_cutoff: R must be positive");
  const double reach = kind == CutoffKind::Quadratic ? 2.0 * R : R;
  if (!(reach < grid.r_max))
    throw config_error("build_cutoff: cutoff support [" + std::to_string(reach) +
                       "] exceeds the grid radius");
  VirialCutoff c;
  c.kind = kind;
  c.R = R;
  c.phi.resize(grid.n_points);
  c.dphi.resize(grid.n_points);
  c.d2phi.resize(grid.n_points);
  c.d3phi.resize(grid.n_points);
  c.d4phi.resize(grid.n_points);
  for (std::size_t j = 0; j < grid.n_points; ++j) {
    const double r = grid.nodes[j];
    c.phi[j] = cutoff_value(kind, R, r, 0);
    c.dphi[j] = cutoff_value(kind, R, r, 1);
    c.d2phi[j] = cutoff_value(kind, R, r, 2);
    c.d3phi[j] = cutoff_value(kind, R, r, 3);
    c.d4phi[j] = cutoff_value(kind, R, r, 4);
  }
  return c;
}

namespace {

// Extend an interior-node integrand to {0, nodes, r_max}: known origin value,
// cubic extrapolation at the truncation end.
std::vector<double> extend(const std::vector<double>& f, double origin) {
  const std::size_t n = f.size();
  std::vector<double> out(n + 2);
  out[0] = origin;
  for (std::size_t j = 0; j < n; ++j) out[j + 1] = f[j];
  out[n + 1] = 3.0 * f[n - 1] - 3.0 * f[n - 2] + f[n - 3];
  return out;
}

}  // namespace

double virial_I(const RadialField& field, const VirialCutoff& cutoff) {
  const RadialGrid& g = *field.grid;
  std::vector<double> f(g.n_points);
  for (std::size_t j = 0; j < g.n_points; ++j)
    f[j] = cutoff.phi[j] * std::norm(field.values[j]);
  auto ext = extend(f, 0.0);
  ext[g.n_points + 1] = 0.0;  // Dirichlet end: |u(r_max)|^2 = 0
  return 4.0 * M_PI * detail::cached_quadrature(g, 2.0)->integrate(ext);
}

double virial_Iprime(const RadialField& field, const VirialCutoff& cutoff) {
  const RadialGrid& g = *field.grid;
  const auto du = detail::radial_derivative(field);
  std::vector<double> f(g.n_points);
  for (std::size_t j = 0; j < g.n_points; ++j)
    f[j] = cutoff.dphi[j] * std::imag(du[j] * std::conj(field.values[j]));
  const auto ext = extend(f, 0.0);
  return 8.0 * M_PI * detail::cached_quadrature(g, 2.0)->integrate(ext);
}

VirialSample virial_Idoubleprime(const RadialField& field, const PotentialSpec& pot,
                                 const VirialCutoff& cutoff) {
  if (cutoff.kind != CutoffKind::Quadratic)
    throw precondition_error("virial_Idoubleprime: QUADRATIC cutoff required");
  const RadialGrid& g = *field.grid;
  const std::size_t n = g.n_points;
  const auto du = detail::radial_derivative(field);
  const auto quad2 = detail::cached_quadrature(g, 2.0);

  VirialSample s;
  s.I = virial_I(field, cutoff);
  s.Iprime = virial_Iprime(field, cutoff);
  s.p_term = 4.0 * p_k(compute_moments(field, pot));

  std::vector<double> f(n);
  // R1 = 4 int (phi'' - 2) |grad u|^2 dx  (radial)
  for (std::size_t j = 0; j < n; ++j) f[j] = (cutoff.d2phi[j] - 2.0) * std::norm(du[j]);
  s.r1 = 16.0 * M_PI * quad2->integrate(extend(f, 0.0));
  // R2 = - int (Laplacian phi - 6) |u|^4 dx
  for (std::size_t j = 0; j < n; ++j) {
    const double lap = cutoff.d2phi[j] + 2.0 * cutoff.dphi[j] / g.nodes[j];
    const double sq = std::norm(field.values[j]);
    f[j] = (lap - 6.0) * sq * sq;
  }
  s.r2 = -4.0 * M_PI * quad2->integrate(extend(f, 0.0));
  // R3 = -2 int (phi'/r - 2)(x.grad V)|u|^2 dx with x.grad V = -alpha V
  if (pot.k > 0.0) {
    for (std::size_t j = 0; j < n; ++j)
      f[j] = (cutoff.dphi[j] / g.nodes[j] - 2.0) * std::norm(field.values[j]);
    const auto quad_v = detail::cached_quadrature(g, 2.0 - pot.alpha);
    s.r3 = 8.0 * M_PI * pot.alpha * pot.k * quad_v->integrate(extend(f, 0.0));
  }
  // R4 = - int (Laplacian^2 phi) |u|^2 dx
  for (std::size_t j = 0; j < n; ++j) {
    const double bilap = cutoff.d4phi[j] + 4.0 * cutoff.d3phi[j] / g.nodes[j];
    f[j] = bilap * std::norm(field.values[j]);
  }
  s.r4 = -4.0 * M_PI * quad2->integrate(extend(f, 0.0));

  s.Idoubleprime = s.p_term + s.r1 + s.r2 + s.r3 + s.r4;
  return s;
}

ConsistencyReport virial_consistency(const std::vector<double>& times,
                                     const std::vector<double>& I,
                                     const std::vector<double>& Iprime,
                                     const std::vector<double>& Idoubleprime) {
  const std::size_t n = times.size();
  if (n < 5) throw config_error("virial_consistency: need at least 5 samples");
  if (I.size() != n || Iprime.size() != n || Idoubleprime.size() != n)
    throw config_error("virial_consistency: series length mismatch");
  const double dt = times[1] - times[0];
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (std::abs((times[i + 1] - times[i]) - dt) > 1e-9 * std::abs(dt))
      throw config_error("virial_consistency: sampling is not uniform");
  double scale1 = 0.0, scale2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    scale1 = std::max(scale1, std::abs(Iprime[i]));
    scale2 = std::max(scale2, std::abs(Idoubleprime[i]));
  }
  ConsistencyReport rep;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double dI = (I[i + 1] - I[i - 1]) / (2.0 * dt);
    const double dIp = (Iprime[i + 1] - Iprime[i - 1]) / (2.0 * dt);
    if (scale1 > 0.0)
      rep.max_rel_err_Iprime =
          std::max(rep.max_rel_err_Iprime, std::abs(dI - Iprime[i]) / scale1);
    if (scale2 > 0.0)
      rep.max_rel_err_Idoubleprime =
          std::max(rep.max_rel_err_Idoubleprime, std::abs(dIp - Idoubleprime[i]) / scale2);
  }
  return rep;
}

}  // namespace nlslab
