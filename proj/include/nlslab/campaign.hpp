#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlslab/dynamics.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/groundstate.hpp"

namespace nlslab {

enum class TrialFamily { GAUSSIAN, SECH, RANDOM_BUMP };

const char* trial_family_name(TrialFamily f);

struct SweepSpec {
  std::vector<double> amplitudes;
  std::vector<double> k_values;
  std::vector<double> alpha_values;
  TrialFamily family = TrialFamily::GAUSSIAN;
  double profile_width = 1.0;
  PropagatorConfig propagator;
  std::uint64_t seed = 1;
  double grid_r_max = 240.0;
  std::size_t grid_n_points = 8191;

  void validate() const;
};

SweepSpec default_sweep();

struct ClassificationOutcome {
  std::size_t cell_index = 0;
  double amplitude = 0.0;
  PotentialSpec pot;
  SetMembership membership;
  DichotomyVerdict verdict;
  bool sign_persisted = false;
  bool prediction_free = false;  // OUTSIDE states carry no dichotomy prediction
  bool mismatch = false;         // membership prediction contradicted by the verdict
  TrajectoryLog log;
};

ClassificationOutcome classify_and_run(const RadialField& initial, const PotentialSpec& pot,
                                       const PropagatorConfig& cfg, double n0);

struct CampaignReport {
  std::vector<ClassificationOutcome> cells;
  std::size_t n_plus_bounded = 0;
  std::size_t n_minus_blowup = 0;
  std::size_t mismatches = 0;
  std::size_t inconclusive = 0;
  std::size_t outside = 0;
  double n0 = 0.0;

  std::string to_json() const;
};

CampaignReport dichotomy_campaign(const SweepSpec& spec, const GroundState& q,
                                  std::size_t threads = 1);

struct LemmaRow {
  std::string name;
  bool passed = false;
  double worst_slack = 0.0;  // most adverse margin observed (>= 0 when passed)
  std::size_t states_checked = 0;
};

struct LemmaTable {
  std::vector<LemmaRow> rows;
  bool all_passed() const;
  std::string to_json() const;
};

struct LemmaSuiteOptions {
  bool negate_potential = false;  // mutation hook: flips the V-moment sign
  std::size_t scale_samples = 9;  // lambda samples for monotonicity / s-calculus
};

LemmaTable lemma_suite(const SweepSpec& spec, const GroundState& q,
                       const LemmaSuiteOptions& opts = {});

}  // namespace nlslab
