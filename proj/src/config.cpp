#include "nlslab/config.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "nlslab/virial.hpp"

namespace nlslab {

const char* subcommand_name(Subcommand s) {
  switch (s) {
    case Subcommand::GroundState: return "ground-state";
    case Subcommand::Functionals: return "functionals";
    case Subcommand::Classify: return "classify";
    case Subcommand::Evolve: return "evolve";
    case Subcommand::Campaign: return "campaign";
    case Subcommand::Lemmas: return "lemmas";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

class KeyTable {
 public:
  KeyTable(std::map<std::string, Entry> entries, std::string origin)
      : entries_(std::move(entries)), origin_(std::move(origin)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    consumed_.insert(key);
    return it->second.value;
  }

  double get_double(const std::string& key, double fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    consumed_.insert(key);
    return parse_double(it->second);
  }

  std::size_t get_size(const std::string& key, std::size_t fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    consumed_.insert(key);
    char* end = nullptr;
    const unsigned long long v = std::strtoull(it->second.value.c_str(), &end, 10);
    if (end == it->second.value.c_str() || *end != '\0')
      fail(it->second.line, "expected a non-negative integer for '" + key + "'");
    return static_cast<std::size_t>(v);
  }

  bool get_bool(const std::string& key, bool fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    consumed_.insert(key);
    const std::string& v = it->second.value;
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(it->second.line, "expected true/false for '" + key + "'");
    return fallback;
  }

  std::vector<double> get_list(const std::string& key, std::vector<double> fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    consumed_.insert(key);
    std::vector<double> out;
    std::stringstream ss(it->second.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      Entry e{trim(item), it->second.line};
      if (e.value.empty())
        fail(it->second.line, "empty element in list '" + key + "'");
      out.push_back(parse_double(e));
    }
    if (out.empty()) fail(it->second.line, "list '" + key + "' is empty");
    return out;
  }

  int line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  void fail(int line, const std::string& msg) const {
    throw config_error(origin_ + ":" + std::to_string(line) + ": " + msg);
  }

  void reject_unknown() const {
    for (const auto& [key, entry] : entries_)
      if (consumed_.count(key) == 0)
        fail(entry.line, "unknown key '" + key + "'");
  }

 private:
  double parse_double(const Entry& e) {
    char* end = nullptr;
    const double v = std::strtod(e.value.c_str(), &end);
    if (end == e.value.c_str() || *end != '\0' || !std::isfinite(v))
      fail(e.line, "expected a finite number, got '" + e.value + "'");
    return v;
  }

  std::map<std::string, Entry> entries_;
  std::set<std::string> consumed_;
  std::string origin_;
};

TrialFamily parse_family(KeyTable& t, const std::string& key, TrialFamily fallback) {
  const std::string v = t.get_string(key, "");
  if (v.empty()) return fallback;
  if (v == "gaussian") return TrialFamily::GAUSSIAN;
  if (v == "sech") return TrialFamily::SECH;
  if (v == "random_bump") return TrialFamily::RANDOM_BUMP;
  t.fail(t.line_of(key), "unknown trial family '" + v + "'");
  return fallback;
}

std::string family_key(TrialFamily f) {
  switch (f) {
    case TrialFamily::GAUSSIAN: return "gaussian";
    case TrialFamily::SECH: return "sech";
    case TrialFamily::RANDOM_BUMP: return "random_bump";
  }
  return "?";
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ", ";
    out += fmt(vs[i]);
  }
  return out;
}

void parse_propagator(KeyTable& t, const std::string& prefix, PropagatorConfig& p) {
  p.dt = t.get_double(prefix + "dt", p.dt);
  p.t_final = t.get_double(prefix + "t_final", p.t_final);
  p.dt_min = t.get_double(prefix + "dt_min", p.dt_min);
  p.blowup_gradient_factor =
      t.get_double(prefix + "blowup_gradient_factor", p.blowup_gradient_factor);
  p.sponge_width = t.get_double(prefix + "sponge_width", p.sponge_width);
  p.record_every = t.get_size(prefix + "record_every", p.record_every);
  p.virial_radius = t.get_double(prefix + "virial_radius", p.virial_radius);
  p.energy_drift_tol = t.get_double(prefix + "energy_drift_tol", p.energy_drift_tol);
  p.boundary_mass_fraction =
      t.get_double(prefix + "boundary_mass_fraction", p.boundary_mass_fraction);
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  std::map<std::string, Entry> entries;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  auto fail = [&](int line, const std::string& msg) {
    throw config_error(origin + ":" + std::to_string(line) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail(line_no, "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value', got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (!section.empty()) key = section + "." + key;
    auto it = entries.find(key);
    if (it != entries.end())
      fail(line_no, "duplicate key '" + key + "' (first defined at line " +
                        std::to_string(it->second.line) + ")");
    entries.emplace(key, Entry{value, line_no});
  }

  KeyTable t(std::move(entries), origin);
  RunConfig cfg;

  const std::string sub = t.get_string("subcommand", "ground-state");
  if (sub == "ground-state")
    cfg.subcommand = Subcommand::GroundState;
  else if (sub == "functionals")
    cfg.subcommand = Subcommand::Functionals;
  else if (sub == "classify")
    cfg.subcommand = Subcommand::Classify;
  else if (sub == "evolve")
    cfg.subcommand = Subcommand::Evolve;
  else if (sub == "campaign")
    cfg.subcommand = Subcommand::Campaign;
  else if (sub == "lemmas")
    cfg.subcommand = Subcommand::Lemmas;
  else
    t.fail(t.line_of("subcommand"), "unknown subcommand '" + sub + "'");

  cfg.grid_r_max = t.get_double("grid.r_max", cfg.grid_r_max);
  cfg.grid_n_points = t.get_size("grid.n_points", cfg.grid_n_points);

  const double k = t.get_double("potential.k", cfg.pot.k);
  const double alpha = t.get_double("potential.alpha", cfg.pot.alpha);
  try {
    cfg.pot = PotentialSpec(k, alpha);
  } catch (const config_error& e) {
    const int ln = std::max(t.line_of("potential.k"), t.line_of("potential.alpha"));
    t.fail(ln, std::string(e.what()) + " (k >= 0 and alpha in (1, 2] required)");
  }

  cfg.family = parse_family(t, "initial.family", cfg.family);
  cfg.amplitude = t.get_double("initial.amplitude", cfg.amplitude);
  cfg.width = t.get_double("initial.width", cfg.width);
  cfg.seed = t.get_size("initial.seed", cfg.seed);
  cfg.field_csv = t.get_string("initial.field_csv", cfg.field_csv);

  parse_propagator(t, "propagator.", cfg.propagator);

  SweepSpec def = default_sweep();
  cfg.sweep = def;
  cfg.sweep.amplitudes = t.get_list("sweep.amplitudes", def.amplitudes);
  cfg.sweep.k_values = t.get_list("sweep.k_values", def.k_values);
  cfg.sweep.alpha_values = t.get_list("sweep.alpha_values", def.alpha_values);
  cfg.sweep.family = parse_family(t, "sweep.family", def.family);
  cfg.sweep.profile_width = t.get_double("sweep.profile_width", def.profile_width);
  cfg.sweep.seed = t.get_size("sweep.seed", def.seed);
  cfg.sweep.grid_r_max = t.get_double("sweep.grid_r_max", def.grid_r_max);
  cfg.sweep.grid_n_points = t.get_size("sweep.grid_n_points", def.grid_n_points);
  parse_propagator(t, "sweep.", cfg.sweep.propagator);

  cfg.mutate_negate_potential =
      t.get_bool("lemmas.negate_potential", cfg.mutate_negate_potential);

  cfg.out_dir = t.get_string("output.dir", cfg.out_dir);
  cfg.threads = t.get_size("output.threads", cfg.threads);
  cfg.verbosity = static_cast<int>(t.get_size("output.verbose", 0));

  t.reject_unknown();

  // cross-field validation (no line numbers: these are constraint violations
  // between keys, reported by name)
  make_radial_grid(cfg.grid_r_max, cfg.grid_n_points);
  cfg.propagator.validate();
  cfg.sweep.validate();
  if (!(cfg.amplitude > 0.0)) throw config_error("initial.amplitude must be positive");
  if (!(cfg.width > 0.0)) throw config_error("initial.width must be positive");
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string RunConfig::echo() const {
  std::ostringstream out;
  out << "subcommand = " << subcommand_name(subcommand) << "\n\n";
  out << "[grid]\n";
  out << "r_max = " << fmt(grid_r_max) << "\n";
  out << "n_points = " << grid_n_points << "\n\n";
  out << "[potential]\n";
  out << "k = " << fmt(pot.k) << "\n";
  out << "alpha = " << fmt(pot.alpha) << "\n\n";
  out << "[initial]\n";
  out << "family = " << family_key(family) << "\n";
  out << "amplitude = " << fmt(amplitude) << "\n";
  out << "width = " << fmt(width) << "\n";
  out << "seed = " << seed << "\n";
  if (!field_csv.empty()) out << "field_csv = " << field_csv << "\n";
  out << "\n[propagator]\n";
  auto emit_prop = [&](const PropagatorConfig& p) {
    out << "dt = " << fmt(p.dt) << "\n";
    out << "t_final = " << fmt(p.t_final) << "\n";
    out << "dt_min = " << fmt(p.dt_min) << "\n";
    out << "blowup_gradient_factor = " << fmt(p.blowup_gradient_factor) << "\n";
    out << "sponge_width = " << fmt(p.sponge_width) << "\n";
    out << "record_every = " << p.record_every << "\n";
    out << "virial_radius = " << fmt(p.virial_radius) << "\n";
    out << "energy_drift_tol = " << fmt(p.energy_drift_tol) << "\n";
    out << "boundary_mass_fraction = " << fmt(p.boundary_mass_fraction) << "\n";
  };
  emit_prop(propagator);
  out << "\n[sweep]\n";
  out << "amplitudes = " << fmt_list(sweep.amplitudes) << "\n";
  out << "k_values = " << fmt_list(sweep.k_values) << "\n";
  out << "alpha_values = " << fmt_list(sweep.alpha_values) << "\n";
  out << "family = " << family_key(sweep.family) << "\n";
  out << "profile_width = " << fmt(sweep.profile_width) << "\n";
  out << "seed = " << sweep.seed << "\n";
  out << "grid_r_max = " << fmt(sweep.grid_r_max) << "\n";
  out << "grid_n_points = " << sweep.grid_n_points << "\n";
  emit_prop(sweep.propagator);
  out << "\n[lemmas]\n";
  out << "negate_potential = " << (mutate_negate_potential ? "true" : "false") << "\n";
  out << "\n[output]\n";
  out << "dir = " << out_dir << "\n";
  out << "threads = " << threads << "\n";
  out << "verbose = " << verbosity << "\n";
  return out.str();
}

namespace {

RadialField build_initial(const RunConfig& cfg, std::shared_ptr<const RadialGrid> grid) {
  if (!cfg.field_csv.empty()) {
    RadialField f = read_field_csv(cfg.field_csv);
    if (!(*f.grid == *grid))
      throw config_error("initial.field_csv grid does not match [grid] parameters");
    return f;
  }
  switch (cfg.family) {
    case TrialFamily::GAUSSIAN:
      return gaussian_profile(std::move(grid), cfg.amplitude, cfg.width);
    case TrialFamily::SECH: return sech_profile(std::move(grid), cfg.amplitude, cfg.width);
    case TrialFamily::RANDOM_BUMP:
      return random_bump_profile(std::move(grid), cfg.amplitude, cfg.seed);
  }
  throw precondition_error("build_initial: unknown family");
}

GroundState solve_reference_ground_state() {
  static std::mutex mutex;
  static std::unique_ptr<GroundState> cached;
  std::lock_guard<std::mutex> lock(mutex);
  if (!cached) {
    auto grid = std::make_shared<const RadialGrid>(make_radial_grid(40.0, 8191));
    cached = std::make_unique<GroundState>(shoot_ground_state(grid));
  }
  return *cached;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write '" + path.string() + "'");
  out << text;
}

nlohmann::ordered_json outcome_json(const ClassificationOutcome& c) {
  nlohmann::ordered_json j;
  j["membership"] = set_tag_name(c.membership.tag);
  j["s_value"] = c.membership.s_value;
  j["p_value"] = c.membership.p_value;
  j["n0"] = c.membership.n0;
  j["verdict"] = verdict_kind_name(c.verdict.kind);
  j["evidence"] = c.verdict.evidence;
  j["kinetic_growth"] = c.verdict.kinetic_growth;
  j["l4_decay_factor"] = c.verdict.l4_decay_factor;
  j["l5_tail_fraction"] = c.verdict.l5_tail_fraction;
  j["sign_persisted"] = c.sign_persisted;
  j["prediction_free"] = c.prediction_free;
  j["mismatch"] = c.mismatch;
  return j;
}

int execute_impl(const RunConfig& cfg, const std::filesystem::path& dir) {
  auto grid = std::make_shared<const RadialGrid>(
      make_radial_grid(cfg.grid_r_max, cfg.grid_n_points));
  switch (cfg.subcommand) {
    case Subcommand::GroundState: {
      const GroundState q = shoot_ground_state(grid);
      const ThresholdCertificate cert = threshold_certificate(q);
      nlohmann::ordered_json j;
      j["center_value"] = q.center_value;
      j["residual"] = q.residual;
      j["n0"] = cert.n0;
      j["pohozaev_kinetic_ratio"] = cert.pohozaev_kinetic_ratio;
      j["pohozaev_quartic_ratio"] = cert.pohozaev_quartic_ratio;
      j["p0_at_q"] = cert.p0_at_q;
      j["i0_at_q"] = cert.i0_at_q;
      write_text(dir / "result.json", j.dump(2) + "\n");
      write_field_csv(q.profile, (dir / "ground_state.csv").string());
      return 0;
    }
    case Subcommand::Functionals: {
      const RadialField f = build_initial(cfg, grid);
      const FunctionalReport rep = make_report(compute_moments(f, cfg.pot));
      const double n0 = threshold_certificate(solve_reference_ground_state()).n0;
      const SetMembership mem = classify(rep, n0);
      nlohmann::ordered_json j = nlohmann::ordered_json::parse(report_to_json(rep));
      j["membership"] = set_tag_name(mem.tag);
      j["n0"] = n0;
      write_text(dir / "result.json", j.dump(2) + "\n");
      return 0;
    }
    case Subcommand::Classify: {
      const RadialField f = build_initial(cfg, grid);
      const double n0 = threshold_certificate(solve_reference_ground_state()).n0;
      const ClassificationOutcome out = classify_and_run(f, cfg.pot, cfg.propagator, n0);
      out.log.write_csv((dir / "trajectory.csv").string());
      write_text(dir / "events.json", out.log.events_json() + "\n");
      write_text(dir / "result.json", outcome_json(out).dump(2) + "\n");
      return out.mismatch ? 1 : 0;
    }
    case Subcommand::Evolve: {
      const RadialField f = build_initial(cfg, grid);
      const TrajectoryLog log = propagator_run(f, cfg.pot, cfg.propagator);
      const DichotomyVerdict v = scattering_diagnostic(log);
      log.write_csv((dir / "trajectory.csv").string());
      write_text(dir / "events.json", log.events_json() + "\n");
      nlohmann::ordered_json j;
      j["verdict"] = verdict_kind_name(v.kind);
      j["evidence"] = v.evidence;
      j["kinetic_growth"] = v.kinetic_growth;
      j["l4_decay_factor"] = v.l4_decay_factor;
      j["l5_tail_fraction"] = v.l5_tail_fraction;
      write_text(dir / "result.json", j.dump(2) + "\n");
      return 0;
    }
    case Subcommand::Campaign: {
      const GroundState q = solve_reference_ground_state();
      const std::size_t threads =
          cfg.threads > 0 ? cfg.threads
                          : std::max(1u, std::thread::hardware_concurrency());
      const CampaignReport rep = dichotomy_campaign(cfg.sweep, q, threads);
      write_text(dir / "result.json", rep.to_json() + "\n");
      for (const auto& cell : rep.cells) {
        char name[64];
        std::snprintf(name, sizeof(name), "cell_%03zu.csv", cell.cell_index);
        cell.log.write_csv((dir / name).string());
      }
      return rep.mismatches > 0 ? 1 : 0;
    }
    case Subcommand::Lemmas: {
      const GroundState q = solve_reference_ground_state();
      LemmaSuiteOptions opts;
      opts.negate_potential = cfg.mutate_negate_potential;
      const LemmaTable table = lemma_suite(cfg.sweep, q, opts);
      write_text(dir / "result.json", table.to_json() + "\n");
      return table.all_passed() ? 0 : 1;
    }
  }
  throw precondition_error("execute: unknown subcommand");
}

}  // namespace

int execute(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  try {
    std::filesystem::path dir(config.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw config_error("cannot create output directory '" + config.out_dir + "'");
    {
      std::ofstream probe(dir / ".write_probe");
      if (!probe) throw config_error("output directory '" + config.out_dir + "' not writable");
    }
    std::filesystem::remove(dir / ".write_probe");

    const int status = execute_impl(config, dir);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    nlohmann::ordered_json manifest;
    manifest["subcommand"] = subcommand_name(config.subcommand);
    manifest["config_echo"] = config.echo();
    manifest["version"] = "0.1.0";
    manifest["wall_time_seconds"] = wall;
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
    return status;
  } catch (const config_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace nlslab
