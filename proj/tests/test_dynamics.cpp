#include <cmath>

#include "doctest.h"
#include "nlslab/dynamics.hpp"
#include "nlslab/functionals.hpp"

using namespace nlslab;

namespace {
std::shared_ptr<const RadialGrid> grid_of(double r_max, std::size_t n) {
  return std::make_shared<const RadialGrid>(make_radial_grid(r_max, n));
}
}  // namespace

TEST_CASE("propagator config validation") {
  PropagatorConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.dt = -1.0;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = PropagatorConfig{};
  cfg.dt_min = 1.0;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = PropagatorConfig{};
  cfg.record_every = 0;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = PropagatorConfig{};
  cfg.boundary_mass_fraction = 2.0;
  CHECK_THROWS_AS(cfg.validate(), config_error);
}

TEST_CASE("linear flow rotates sine modes exactly") {
  const auto grid = grid_of(20.0, 511);
  const Propagator prop(grid, PotentialSpec(0.0, 1.5));
  // u = sin(3 pi r / L)/r is an exact eigenmode of the Dirichlet Laplacian
  const double k3 = 3.0 * M_PI / grid->r_max;
  RadialField f = zero_field(grid, "mode");
  for (std::size_t j = 0; j < f.size(); ++j)
    f.values[j] = std::sin(k3 * grid->nodes[j]) / grid->nodes[j];
  const double dt = 0.05;
  RadialField g = f;
  for (int s = 0; s < 8; ++s) g = prop.step(g, dt, 0.0, false, false);
  const auto phase = std::polar(1.0, -k3 * k3 * dt * 8.0);
  for (std::size_t j = 100; j < f.size(); j += 83) {
    const auto exact = f.values[j] * phase;
    CHECK(std::abs(g.values[j] - exact) < 1e-12);
  }
}

TEST_CASE("one step preserves mass to rounding") {
  const auto grid = grid_of(40.0, 1023);
  const PotentialSpec pot(0.5, 1.5);
  const Propagator prop(grid, pot);
  const auto f = gaussian_profile(grid, 1.0, 1.0);
  const auto g = prop.step(f, 0.01);
  CHECK(prop.native_mass(g) == doctest::Approx(prop.native_mass(f)).epsilon(1e-13));
  // the quadrature-grade mass is not the scheme invariant; it only stays close
  CHECK(compute_moments(g, pot).mass ==
        doctest::Approx(compute_moments(f, pot).mass).epsilon(1e-5));
}

TEST_CASE("time reversal") {
  const auto grid = grid_of(40.0, 1023);
  const Propagator prop(grid, PotentialSpec(0.3, 1.5));
  const auto f = gaussian_profile(grid, 0.8, 1.2);
  auto g = prop.step(f, 0.01);
  g = prop.step(g, -0.01);
  double worst = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j)
    worst = std::max(worst, std::abs(g.values[j] - f.values[j]));
  CHECK(worst < 1e-10);
}

TEST_CASE("global phase invariance of logged scalars") {
  const auto grid = grid_of(40.0, 1023);
  const PotentialSpec pot(0.25, 1.5);
  PropagatorConfig cfg;
  cfg.t_final = 0.5;
  cfg.record_every = 10;
  const auto f = gaussian_profile(grid, 0.5, 1.0);
  const auto log1 = propagator_run(f, pot, cfg);
  const auto log2 = propagator_run(scale_field(f, std::polar(1.0, 1.1)), pot, cfg);
  REQUIRE(log1.samples.size() == log2.samples.size());
  for (std::size_t i = 0; i < log1.samples.size(); ++i) {
    CHECK(log1.samples[i].mass == doctest::Approx(log2.samples[i].mass).epsilon(1e-12));
    CHECK(log1.samples[i].energy == doctest::Approx(log2.samples[i].energy).epsilon(1e-12));
    CHECK(log1.samples[i].virial_Iprime ==
          doctest::Approx(log2.samples[i].virial_Iprime).epsilon(1e-10));
  }
}

TEST_CASE("strang splitting is second order") {
  const auto grid = grid_of(30.0, 1023);
  const Propagator prop(grid, PotentialSpec(0.0, 1.5));
  const auto f = gaussian_profile(grid, 1.0, 1.0);
  const double T = 0.4;
  auto evolve = [&](double dt) {
    RadialField g = f;
    const int steps = static_cast<int>(std::round(T / dt));
    for (int s = 0; s < steps; ++s) g = prop.step(g, dt);
    return g;
  };
  const auto ref = evolve(0.4 / 512.0);
  auto err = [&](const RadialField& g) {
    double acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) acc += std::norm(g.values[j] - ref.values[j]);
    return std::sqrt(acc);
  };
  const double e1 = err(evolve(0.4 / 16.0));
  const double e2 = err(evolve(0.4 / 32.0));
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("small data stays bounded and flat") {
  const auto grid = grid_of(80.0, 2047);
  const PotentialSpec pot(0.25, 1.5);
  PropagatorConfig cfg;
  cfg.t_final = 6.0;
  const auto log = propagator_run(gaussian_profile(grid, 0.1, 1.0), pot, cfg);
  REQUIRE(log.terminal.has_value());
  CHECK(log.terminal->kind == EventKind::HORIZON_REACHED);
  const auto& first = log.samples.front();
  const auto& last = log.samples.back();
  CHECK(std::abs(last.mass - first.mass) < 1e-8 * first.mass);
  CHECK(std::abs(last.energy - first.energy) < 1e-6 * std::max(1.0, std::abs(first.energy)));
  const auto v = scattering_diagnostic(log);
  CHECK(v.kinetic_growth <= 2.0);
  CHECK(v.l4_decay_factor > 1.0);
  CHECK(sign_persistence_check(log, 18.897));
}

TEST_CASE("supercritical data triggers the blow-up witness") {
  const auto grid = grid_of(40.0, 2047);
  const PotentialSpec pot(0.0, 1.5);
  PropagatorConfig cfg;
  cfg.t_final = 5.0;
  cfg.dt = 1e-3;
  const auto log = propagator_run(gaussian_profile(grid, 4.5, 1.0), pot, cfg);
  REQUIRE(log.terminal.has_value());
  const auto v = scattering_diagnostic(log);
  CHECK(v.kind == VerdictKind::BLOWUP_WITNESS);
  CHECK(v.kinetic_growth >= 100.0);
  CHECK(sign_persistence_check(log, 18.897));
}

TEST_CASE("trajectory csv and events") {
  const auto grid = grid_of(40.0, 511);
  PropagatorConfig cfg;
  cfg.t_final = 0.2;
  cfg.record_every = 5;
  const auto log = propagator_run(gaussian_profile(grid, 0.2, 1.0), PotentialSpec(0.0, 1.5), cfg);
  CHECK(log.samples.size() >= 3);
  CHECK(log.samples.front().time == 0.0);
  const std::string j = log.events_json();
  CHECK(j.find("HORIZON_REACHED") != std::string::npos);
}
