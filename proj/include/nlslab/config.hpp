#pragma once

#include <map>
#include <string>

#include "nlslab/campaign.hpp"

namespace nlslab {

enum class Subcommand { GroundState, Functionals, Classify, Evolve, Campaign, Lemmas };

const char* subcommand_name(Subcommand s);

struct RunConfig {
  Subcommand subcommand = Subcommand::GroundState;

  double grid_r_max = 40.0;
  std::size_t grid_n_points = 8191;

  PotentialSpec pot{0.0, 1.5};

  // initial data (functionals / classify / evolve)
  TrialFamily family = TrialFamily::GAUSSIAN;
  double amplitude = 1.0;
  double width = 1.0;
  std::uint64_t seed = 1;
  std::string field_csv;  // optional: load initial data from CSV instead

  PropagatorConfig propagator;
  SweepSpec sweep;
  bool mutate_negate_potential = false;

  std::string out_dir = "out";
  std::size_t threads = 0;  // 0 -> hardware concurrency
  int verbosity = 0;

  /// Normalized config echo (deterministic key order) written to the
  /// manifest; re-parsing it reproduces this RunConfig exactly.
  std::string echo() const;
};

/// Line-based `key = value` format with `[section]` headers. Unknown keys,
/// duplicates, type errors and constraint violations are configuration
/// errors reported with line numbers.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

/// Exit status: 0 success, 1 scientific failure, 2 configuration error,
/// 3 numerical error.
int execute(const RunConfig& config);

}  // namespace nlslab
