#pragma once

#include <utility>
#include <vector>

#include "nlslab/functionals.hpp"
#include "nlslab/grid.hpp"

namespace nlslab {

/// Free ground state Q of  Q'' + (2/r) Q' - Q + Q^3 = 0, positive, radial,
/// decaying; computed in w = r*Q coordinates.
struct GroundState {
  RadialField profile;       // Q sampled on the grid
  double center_value = 0.0; // Q(0)
  double residual = 0.0;     // max ODE defect over r < r_max/2
  MomentSet moments;         // at k = 0
};

struct ThresholdCertificate {
  double n0 = 0.0;
  double pohozaev_kinetic_ratio = 0.0;  // ||grad Q||^2 / ||Q||^2, exactly 3
  double pohozaev_quartic_ratio = 0.0;  // ||Q||_4^4 / ||Q||^2, exactly 4
  double p0_at_q = 0.0;
  double i0_at_q = 0.0;
};

/// Shooting + bisection on Q(0) in the given bracket, then Newton refinement
/// of the Numerov discretization of w'' = w - w^3/r^2 on the grid.
GroundState shoot_ground_state(std::shared_ptr<const RadialGrid> grid,
                               std::pair<double, double> bracket = {4.0, 4.6});

ThresholdCertificate threshold_certificate(const GroundState& q);

struct ThetaPoint {
  double shift = 0.0;
  double theta = 0.0;          // root of K_k^{a,b}(theta * tau_shift Q) = 0
  double action_value = 0.0;   // S_k at the root
  double v_shift = 0.0;        // off-center V-moment at this shift
};

/// The translated-ground-state construction certifying n_k = n_0: for each
/// shift solves K_k^{a,b}(theta * tau_x Q) = 0 for theta > 1.
std::vector<ThetaPoint> theta_sequence(const GroundState& q, const PotentialSpec& pot,
                                       const std::vector<double>& shifts, const ScalePair& s);

struct NonAttainmentReport {
  double shift = 0.0;
  double p_margin = 0.0;       // -(x.grad V)-moment of the shifted state, > 0 for k>0
  double j_margin = 0.0;       // 2V + x.grad V moment of the shifted state, >= 0
  double p_shifted = 0.0;      // P_k(tau_x Q)
  double p_centered = 0.0;     // P_k(Q)
  double j_shifted = 0.0;      // J^{3,-2}_k(tau_x Q)
  double j_centered = 0.0;     // J^{3,-2}_k(Q)
};

/// Finite-shift witnesses of the two strict inequalities behind
/// non-attainment of n_k: translation strictly lowers P_k and J^{3,-2}.
NonAttainmentReport non_attainment_probe(const GroundState& q, const PotentialSpec& pot,
                                         double shift);

}  // namespace nlslab
