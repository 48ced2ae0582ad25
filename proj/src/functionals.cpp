#include "nlslab/functionals.hpp"

#include <cmath>

#include "json.hpp"

namespace nlslab {

void ScalePair::validate() const {
  if (!(a > 0.0)) throw config_error("ScalePair: a must be positive");
  if (!(b <= 0.0)) throw config_error("ScalePair: b must be <= 0");
  if (!(2.0 * a + b > 0.0)) throw config_error("ScalePair: 2a+b must be positive");
  if (!(2.0 * a + 3.0 * b >= 0.0)) throw config_error("ScalePair: 2a+3b must be >= 0");
}

double energy(const MomentSet& m) {
  return 0.5 * m.kinetic + 0.5 * m.v_moment - 0.25 * m.quartic;
}

double action(const MomentSet& m) { return energy(m) + 0.5 * m.mass; }

MomentSet scaled_moments(const MomentSet& m, const ScalePair& s, double lambda, double alpha) {
  s.validate();
  MomentSet out;
  out.mass = m.mass * std::exp(s.mu_under() * lambda);
  out.kinetic = m.kinetic * std::exp(s.mu_bar() * lambda);
  out.quartic = m.quartic * std::exp((4.0 * s.a + 3.0 * s.b) * lambda);
  out.v_moment = m.v_moment * std::exp((s.mu_under() - alpha * s.b) * lambda);
  out.xgradv_moment = -alpha * out.v_moment;
  return out;
}

double scaled_action(const MomentSet& m, const ScalePair& s, double lambda, double alpha) {
  return action(scaled_moments(m, s, lambda, alpha));
}

double k_ab(const MomentSet& m, const ScalePair& s) {
  s.validate();
  return 0.5 * s.mu_bar() * m.kinetic + 0.5 * s.mu_under() * (m.v_moment + m.mass) +
         0.5 * s.b * m.xgradv_moment - 0.25 * (4.0 * s.a + 3.0 * s.b) * m.quartic;
}

double p_k(const MomentSet& m) {
  return 2.0 * m.kinetic - m.xgradv_moment - 1.5 * m.quartic;
}

double i_k(const MomentSet& m) {
  return m.kinetic + m.v_moment + m.mass - m.quartic;
}

double j_ab(const MomentSet& m, const ScalePair& s) {
  return action(m) - k_ab(m, s) / s.mu_bar();
}

double h1k_norm_sq(const MomentSet& m) { return m.kinetic + m.v_moment + m.mass; }

double gn_quotient(const MomentSet& m) {
  if (m.mass <= 0.0 || m.kinetic <= 0.0)
    throw precondition_error("gn_quotient: requires a nonzero field");
  return m.quartic / (std::sqrt(m.mass) * std::pow(m.kinetic, 1.5));
}

FunctionalReport make_report(const MomentSet& m) {
  FunctionalReport r;
  r.moments = m;
  r.energy = energy(m);
  r.action = action(m);
  r.p = p_k(m);
  r.i = i_k(m);
  r.h1k_sq = h1k_norm_sq(m);
  return r;
}

std::string report_to_json(const FunctionalReport& r) {
  nlohmann::ordered_json j;
  j["moments"] = {{"mass", r.moments.mass},
                  {"kinetic", r.moments.kinetic},
                  {"quartic", r.moments.quartic},
                  {"v_moment", r.moments.v_moment},
                  {"xgradv_moment", r.moments.xgradv_moment}};
  j["energy"] = r.energy;
  j["action"] = r.action;
  j["p"] = r.p;
  j["i"] = r.i;
  j["h1k_sq"] = r.h1k_sq;
  return j.dump(2);
}

const char* set_tag_name(SetTag tag) {
  switch (tag) {
    case SetTag::N_PLUS: return "N_PLUS";
    case SetTag::N_MINUS: return "N_MINUS";
    case SetTag::OUTSIDE: return "OUTSIDE";
  }
  return "?";
}

SetMembership classify(const FunctionalReport& report, double n0) {
  if (!(n0 > 0.0)) throw precondition_error("classify: n0 must be positive");
  SetMembership m;
  m.s_value = report.action;
  m.p_value = report.p;
  m.n0 = n0;
  if (report.action < n0)
    m.tag = report.p >= 0.0 ? SetTag::N_PLUS : SetTag::N_MINUS;
  else
    m.tag = SetTag::OUTSIDE;
  return m;
}

BoundCheck check_p_upper_bound(const FunctionalReport& report, double n0) {
  const double bound = -4.0 * (n0 - report.action);
  BoundCheck c;
  c.slack = bound - report.p;
  c.passed = c.slack >= -inequality_tolerance(std::abs(bound) + std::abs(report.p));
  return c;
}

BoundCheck check_p_lower_bound(const FunctionalReport& report, double n0) {
  const double alt = 0.4 * (report.moments.kinetic - 0.5 * report.moments.xgradv_moment);
  const double bound = std::min(4.0 * (n0 - report.action), alt);
  BoundCheck c;
  c.slack = report.p - bound;
  c.passed = c.slack >= -inequality_tolerance(std::abs(bound) + std::abs(report.p));
  return c;
}

BoundCheck h1k_equivalence_check(const FunctionalReport& report, double n0) {
  (void)n0;
  const double q = report.h1k_sq;
  BoundCheck c;
  c.slack = std::min(report.action - 0.25 * q, 0.5 * q - report.action);
  c.passed = c.slack >= -inequality_tolerance(q);
  return c;
}

}  // namespace nlslab
