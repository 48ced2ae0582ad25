#pragma once

#include <string>

#include "nlslab/moments.hpp"

namespace nlslab {

/// Admissible scaling exponents (a, b) of the family e^{a*lambda} phi(e^{-b*lambda} x):
/// a > 0, b <= 0, 2a+b > 0, 2a+3b >= 0.
struct ScalePair {
  double a = 3.0;
  double b = -2.0;

  ScalePair() = default;
  ScalePair(double a_, double b_) : a(a_), b(b_) { validate(); }
  void validate() const;

  double mu_bar() const { return 2.0 * a + b; }      // kinetic scaling rate
  double mu_under() const { return 2.0 * a + 3.0 * b; }  // mass scaling rate
};

double energy(const MomentSet& m);
double action(const MomentSet& m);

/// Action of the exactly-rescaled moments at parameter lambda; alpha enters
/// through the V-moment scaling e^{(2a+3b-alpha*b) lambda}.
double scaled_action(const MomentSet& m, const ScalePair& s, double lambda, double alpha);
MomentSet scaled_moments(const MomentSet& m, const ScalePair& s, double lambda, double alpha);

/// Scaling derivative of the action at lambda = 0 along (a, b).
double k_ab(const MomentSet& m, const ScalePair& s);
double p_k(const MomentSet& m);   // k_ab at (3, -2)
double i_k(const MomentSet& m);   // k_ab at (3, 0) / 3

/// action - k_ab/(2a+b); positive for every nonzero field and nondecreasing
/// along the scaling flow.
double j_ab(const MomentSet& m, const ScalePair& s);

double h1k_norm_sq(const MomentSet& m);

/// Quartic-over-(mass^1/2 kinetic^3/2) quotient; maximized by the free ground state.
double gn_quotient(const MomentSet& m);

struct FunctionalReport {
  MomentSet moments;
  double energy = 0.0;
  double action = 0.0;
  double p = 0.0;
  double i = 0.0;
  double h1k_sq = 0.0;
};

FunctionalReport make_report(const MomentSet& m);
std::string report_to_json(const FunctionalReport& r);

enum class SetTag { N_PLUS, N_MINUS, OUTSIDE };

struct SetMembership {
  SetTag tag = SetTag::OUTSIDE;
  double s_value = 0.0;
  double p_value = 0.0;
  double n0 = 0.0;
};

SetMembership classify(const FunctionalReport& report, double n0);
const char* set_tag_name(SetTag tag);

struct BoundCheck {
  bool passed = false;
  double slack = 0.0;  // bound satisfied by this margin (>= 0 when passed)
};

/// N^- members satisfy P <= -4(n0 - S). Slack = -4(n0 - S) - P.
BoundCheck check_p_upper_bound(const FunctionalReport& report, double n0);
/// N^+ members satisfy P >= min{4(n0 - S), (2/5)(kinetic - xgradv/2)}.
BoundCheck check_p_lower_bound(const FunctionalReport& report, double n0);
/// N^+ members satisfy h1k^2/4 <= S <= h1k^2/2.
BoundCheck h1k_equivalence_check(const FunctionalReport& report, double n0);

/// Absolute + relative slack applied to all lemma inequality checks
/// (moments carry ~1e-8 quadrature error).
inline double inequality_tolerance(double scale) {
  return 1e-9 + 1e-7 * std::abs(scale);
}

}  // namespace nlslab
