#pragma once

#include <vector>

#include "nlslab/grid.hpp"
#include "nlslab/moments.hpp"

namespace nlslab {

enum class CutoffKind { Exterior, Quadratic };

/// Radial virial weight sampled with four derivatives.
///
/// EXTERIOR:  phi = 0 on [0, R/2], 1 on [R, inf), 0 <= phi <= 1,
///            0 <= phi' <= 4/R (quintic smoothstep blend).
/// QUADRATIC: phi = r^2 on [0, R], constant plateau (2.123 R^2) on [2R, inf),
///            0 <= phi <= r^2, phi'' <= 2, |phi''''| <= 360/R^2
///            (piecewise-quintic blend on [R, 2R] with certified envelopes).
struct VirialCutoff {
  CutoffKind kind = CutoffKind::Quadratic;
  double R = 0.0;
  std::vector<double> phi, dphi, d2phi, d3phi, d4phi;  // at grid nodes
};

VirialCutoff build_cutoff(CutoffKind kind, double R, const RadialGrid& grid);

/// Pointwise cutoff evaluation (used by the node sampling and the bound
/// verification tests).
double cutoff_value(CutoffKind kind, double R, double r, int derivative);

struct VirialSample {
  double I = 0.0;
  double Iprime = 0.0;
  double Idoubleprime = 0.0;
  double p_term = 0.0;                       // 4 P_k
  double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0;
};

/// I = integral phi |u|^2 dx.
double virial_I(const RadialField& field, const VirialCutoff& cutoff);

/// I' = 2 Im integral phi'(r) (d_r u) conj(u) dx.
double virial_Iprime(const RadialField& field, const VirialCutoff& cutoff);

/// Full I'' = 4 P_k + R1 + R2 + R3 + R4 decomposition; QUADRATIC cutoff only.
VirialSample virial_Idoubleprime(const RadialField& field, const PotentialSpec& pot,
                                 const VirialCutoff& cutoff);

struct ConsistencyReport {
  double max_rel_err_Iprime = 0.0;       // dI/dt vs I'
  double max_rel_err_Idoubleprime = 0.0; // dI'/dt vs I''
};

/// Central-difference cross-validation of uniformly sampled (I, I', I'')
/// time series.
ConsistencyReport virial_consistency(const std::vector<double>& times,
                                     const std::vector<double>& I,
                                     const std::vector<double>& Iprime,
                                     const std::vector<double>& Idoubleprime);

}  // namespace nlslab
