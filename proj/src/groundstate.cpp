#include "nlslab/groundstate.hpp"

#include <algorithm>
#include <cmath>

#include "nlslab/moments.hpp"

namespace nlslab {

namespace {

struct ShotState {
  double w = 0.0;
  double dw = 0.0;
};

// w'' = w - w^3 / r^2
inline double rhs(double r, double w) { return w - w * w * w / (r * r); }

inline void rk4_step(double r, double h, ShotState& s) {
  const double k1w = s.dw, k1v = rhs(r, s.w);
  const double k2w = s.dw + 0.5 * h * k1v, k2v = rhs(r + 0.5 * h, s.w + 0.5 * h * k1w);
  const double k3w = s.dw + 0.5 * h * k2v, k3v = rhs(r + 0.5 * h, s.w + 0.5 * h * k2w);
  const double k4w = s.dw + h * k3v, k4v = rhs(r + h, s.w + h * k3w);
  s.w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
  s.dw += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
}

// Series start: Q(r) = c + q2 r^2 + q4 r^4, w = r Q.
ShotState series_start(double c, double r) {
  const double q2 = (c - c * c * c) / 6.0;
  const double q4 = q2 * (1.0 - 3.0 * c * c) / 20.0;
  ShotState s;
  s.w = r * (c + q2 * r * r + q4 * r * r * r * r);
  s.dw = c + 3.0 * q2 * r * r + 5.0 * q4 * r * r * r * r;
  return s;
}

// +1: trajectory turned back up (Q(0) too small); -1: w crossed zero
// (Q(0) too large); 0: undecided up to r_end.
int classify_shot(double c, double h, double r_end) {
  double r = 4.0 * h;
  ShotState s = series_start(c, r);
  bool past_peak = false;
  while (r < r_end) {
    rk4_step(r, h, s);
    r += h;
    if (s.w < 0.0) return -1;
    if (s.dw < 0.0) past_peak = true;
    if (past_peak && s.dw > 0.0) return +1;
  }
  return 0;
}

}  // namespace

GroundState shoot_ground_state(std::shared_ptr<const RadialGrid> grid,
                               std::pair<double, double> bracket) {
  const RadialGrid& g = *grid;
  const double h_shoot = 5e-4;
  const double r_end = 15.0;
  double lo = bracket.first, hi = bracket.second;
  if (classify_shot(lo, h_shoot, r_end) != +1 || classify_shot(hi, h_shoot, r_end) != -1)
    throw numerical_error("shoot_ground_state: bracket does not straddle the ground state");
  double c = 0.5 * (lo + hi);
  for (int iter = 0; iter < 60 && hi - lo > 1e-13; ++iter) {
    c = 0.5 * (lo + hi);
    const int cls = classify_shot(c, h_shoot, r_end);
    if (cls == -1)
      hi = c;  // w crossed zero: center value too large
    else if (cls == +1)
      lo = c;  // trajectory turned back up: center value too small
    else
      break;  // decayed cleanly below resolution of the shot
  }

  // Sample w on the grid by re-integrating with substeps of the grid spacing,
  // grafting the exact-rate exponential tail where the shot leaves the
  // w' ~ -w regime (the unstable mode contaminates the shot at large r).
  const std::size_t sub = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                       std::ceil(g.spacing / 2.5e-4)));
  const double h_fine = g.spacing / static_cast<double>(sub);
  std::vector<double> w_nodes(g.n_points, 0.0);
  {
    double r = g.spacing;  // start at the first node via the series
    ShotState s = series_start(c, r);
    w_nodes[0] = s.w;
    double best_defect = 1e300;
    std::size_t graft_idx = g.n_points;
    for (std::size_t j = 1; j < g.n_points; ++j) {
      for (std::size_t q = 0; q < sub; ++q) {
        rk4_step(r, h_fine, s);
        r += h_fine;
      }
      w_nodes[j] = s.w;
      const double rj = g.nodes[j];
      if (rj > 4.0 && rj < 12.0 && s.w > 0.0) {
        const double defect = std::abs(s.dw + s.w) / s.w;
        if (defect < best_defect) {
          best_defect = defect;
          graft_idx = j;
        }
      }
      if (r > 12.5) break;
    }
    if (graft_idx >= g.n_points)
      throw numerical_error("shoot_ground_state: no decaying regime found for the tail graft");
    const double r_graft = g.nodes[graft_idx];
    const double w_graft = w_nodes[graft_idx];
    for (std::size_t j = graft_idx + 1; j < g.n_points; ++j)
      w_nodes[j] = w_graft * std::exp(-(g.nodes[j] - r_graft));
  }

  // Newton refinement of the Numerov discretization
  //   (w_{j-1} - 2 w_j + w_{j+1})/h^2 = (f_{j-1} + 10 f_j + f_{j+1})/12,
  // f = w - w^3/r^2, Dirichlet ends; tridiagonal Thomas solve.
  const double h = g.spacing;
  const std::size_t n = g.n_points;
  auto f_of = [&](std::size_t j, const std::vector<double>& w) -> double {
    const double rj = g.nodes[j];
    return w[j] - w[j] * w[j] * w[j] / (rj * rj);
  };
  auto fp_of = [&](std::size_t j, const std::vector<double>& w) -> double {
    const double rj = g.nodes[j];
    return 1.0 - 3.0 * w[j] * w[j] / (rj * rj);
  };
  std::vector<double> defect(n), dl(n), dm(n), du(n), delta(n);
  auto compute_defect = [&](const std::vector<double>& w) {
    for (std::size_t j = 0; j < n; ++j) {
      const double wl = j == 0 ? 0.0 : w[j - 1];
      const double wr = j + 1 == n ? 0.0 : w[j + 1];
      const double fl = j == 0 ? 0.0 : f_of(j - 1, w);
      const double fr = j + 1 == n ? 0.0 : f_of(j + 1, w);
      defect[j] = (wl - 2.0 * w[j] + wr) / (h * h) - (fl + 10.0 * f_of(j, w) + fr) / 12.0;
    }
  };
  for (int iter = 0; iter < 30; ++iter) {
    compute_defect(w_nodes);
    double max_defect = 0.0;
    for (double d : defect) max_defect = std::max(max_defect, std::abs(d));
    if (max_defect < 1e-10) break;
    for (std::size_t j = 0; j < n; ++j) {
      dm[j] = -2.0 / (h * h) - (10.0 / 12.0) * fp_of(j, w_nodes);
      dl[j] = j == 0 ? 0.0 : 1.0 / (h * h) - fp_of(j - 1, w_nodes) / 12.0;
      du[j] = j + 1 == n ? 0.0 : 1.0 / (h * h) - fp_of(j + 1, w_nodes) / 12.0;
    }
    // Thomas: solve J * delta = -defect
    std::vector<double> cp(n), dp(n);
    cp[0] = du[0] / dm[0];
    dp[0] = -defect[0] / dm[0];
    for (std::size_t j = 1; j < n; ++j) {
      const double denom = dm[j] - dl[j] * cp[j - 1];
      cp[j] = du[j] / denom;
      dp[j] = (-defect[j] - dl[j] * dp[j - 1]) / denom;
    }
    delta[n - 1] = dp[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) delta[j] = dp[j] - cp[j] * delta[j + 1];
    for (std::size_t j = 0; j < n; ++j) w_nodes[j] += delta[j];
  }
  compute_defect(w_nodes);

  GroundState q;
  q.profile = zero_field(grid, "ground_state");
  for (std::size_t j = 0; j < n; ++j) q.profile.values[j] = w_nodes[j] / g.nodes[j];
  const auto& u = q.profile.values;
  q.center_value = (3.0 * u[0] - 3.0 * u[1] + u[2]).real();
  q.residual = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    if (g.nodes[j] < 0.5 * g.r_max) q.residual = std::max(q.residual, std::abs(defect[j]));
  q.moments = compute_moments(q.profile, PotentialSpec(0.0, 1.5));
  return q;
}

ThresholdCertificate threshold_certificate(const GroundState& q) {
  ThresholdCertificate c;
  c.n0 = action(q.moments);
  c.pohozaev_kinetic_ratio = q.moments.kinetic / q.moments.mass;
  c.pohozaev_quartic_ratio = q.moments.quartic / q.moments.mass;
  c.p0_at_q = p_k(q.moments);
  c.i0_at_q = i_k(q.moments);
  return c;
}

std::vector<ThetaPoint> theta_sequence(const GroundState& q, const PotentialSpec& pot,
                                       const std::vector<double>& shifts, const ScalePair& s) {
  s.validate();
  pot.validate();
  std::vector<ThetaPoint> out;
  out.reserve(shifts.size());
  const MomentSet& m = q.moments;
  for (double x : shifts) {
    if (!(x > 0.0)) throw precondition_error("theta_sequence: shifts must be positive");
    ThetaPoint p;
    p.shift = x;
    p.v_shift = offcenter_v_moment(q.profile, pot, x);
    // K_k^{a,b}(theta tau_x Q) = 0 with the free Pohozaev relations gives
    // theta^2 = 1 + 2 (mu_under - alpha b) V_x / ((4a + 3b) L4).
    const double quartic_rate = 4.0 * s.a + 3.0 * s.b;
    const double theta_sq =
        1.0 + 2.0 * (s.mu_under() - pot.alpha * s.b) * p.v_shift / (quartic_rate * m.quartic);
    if (!(theta_sq > 0.0)) throw numerical_error("theta_sequence: no positive root");
    p.theta = std::sqrt(theta_sq);
    p.action_value = 0.5 * theta_sq * (m.kinetic + p.v_shift + m.mass) -
                     0.25 * theta_sq * theta_sq * m.quartic;
    out.push_back(p);
  }
  return out;
}

NonAttainmentReport non_attainment_probe(const GroundState& q, const PotentialSpec& pot,
                                         double shift) {
  pot.validate();
  if (!(shift > 0.0)) throw precondition_error("non_attainment_probe: shift must be positive");
  NonAttainmentReport r;
  r.shift = shift;
  const double v_shift = offcenter_v_moment(q.profile, pot, shift);
  MomentSet centered = compute_moments(q.profile, pot);
  MomentSet shifted = centered;
  shifted.v_moment = v_shift;
  shifted.xgradv_moment = -pot.alpha * v_shift;
  const ScalePair s32(3.0, -2.0);
  r.p_shifted = p_k(shifted);
  r.p_centered = p_k(centered);
  r.j_shifted = j_ab(shifted, s32);
  r.j_centered = j_ab(centered, s32);
  r.p_margin = pot.alpha * v_shift;
  r.j_margin = (2.0 - pot.alpha) * v_shift;
  return r;
}

}  // namespace nlslab
