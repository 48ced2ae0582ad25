#pragma once

#include "nlslab/grid.hpp"
#include "nlslab/potential.hpp"

namespace nlslab {

/// The five integrals every variational functional is built from. All are
/// full 3d integrals of the radial profile (4*pi*r^2 measure).
struct MomentSet {
  double mass = 0.0;            // ||phi||_2^2
  double kinetic = 0.0;         // ||grad phi||_2^2
  double quartic = 0.0;         // ||phi||_4^4
  double v_moment = 0.0;        // integral V |phi|^2
  double xgradv_moment = 0.0;   // integral (x.grad V) |phi|^2 = -alpha*v_moment
};

enum class DerivativeScheme { Spectral, FiniteDifference4 };

MomentSet compute_moments(const RadialField& field, const PotentialSpec& pot,
                          DerivativeScheme scheme = DerivativeScheme::Spectral);

/// ||phi||_5^5 (needed by the finite-horizon scattering accumulator).
double quintic_moment(const RadialField& field);

/// 4*pi * integral( r^2 |u|^2, r >= radius ).
double exterior_mass(const RadialField& field, double radius);

/// V-moment of the profile recentred at distance `shift` from the potential
/// origin: 2*pi * int_0^inf int_0^pi k s^2 sin(t) |u(s)|^2
///   / (s^2 + shift^2 + 2 s shift cos(t))^(alpha/2) dt ds.
/// Gauss-Legendre in theta (node count doubled from 64 until the estimated
/// error is below 1e-8 absolute), radial grid quadrature in s.
double offcenter_v_moment(const RadialField& field, const PotentialSpec& pot, double shift);

}  // namespace nlslab
