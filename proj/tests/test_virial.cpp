#include <cmath>

#include "doctest.h"
#include "nlslab/functionals.hpp"
#include "nlslab/moments.hpp"
#include "nlslab/quadrature.hpp"
#include "nlslab/virial.hpp"

using namespace nlslab;

namespace {
std::shared_ptr<const RadialGrid> grid_of(double r_max, std::size_t n) {
  return std::make_shared<const RadialGrid>(make_radial_grid(r_max, n));
}
}  // namespace

TEST_CASE("quadratic cutoff envelopes") {
  const double R = 3.0;
  CHECK(cutoff_value(CutoffKind::Quadratic, R, 0.5 * R, 0) == doctest::Approx(R * R / 4.0));
  CHECK(cutoff_value(CutoffKind::Quadratic, R, 0.5 * R, 2) == doctest::Approx(2.0));
  CHECK(cutoff_value(CutoffKind::Quadratic, R, 2.5 * R, 0) == doctest::Approx(2.123 * R * R));
  CHECK(cutoff_value(CutoffKind::Quadratic, R, 2.5 * R, 1) == 0.0);
  for (int i = 0; i <= 40000; ++i) {
    const double r = 8.0 * R * static_cast<double>(i) / 40000.0;
    const double phi = cutoff_value(CutoffKind::Quadratic, R, r, 0);
    CHECK(phi >= -1e-12);
    CHECK(phi - r * r <= 1e-10);
    CHECK(cutoff_value(CutoffKind::Quadratic, R, r, 2) <= 2.0 + 1e-12);
    CHECK(std::abs(cutoff_value(CutoffKind::Quadratic, R, r, 4)) <= 360.0 / (R * R) + 1e-12);
    CHECK(cutoff_value(CutoffKind::Quadratic, R, r, 1) <= 2.0 * r + 1e-12);
    CHECK(cutoff_value(CutoffKind::Quadratic, R, r, 1) >= -1e-12);
  }
}

TEST_CASE("quadratic cutoff joins are smooth through the third derivative") {
  const double R = 2.0;
  for (double r0 : {R, 1.3 * R, 1.7 * R, 2.0 * R}) {
    const double eps = 1e-6;
    for (int d = 0; d <= 3; ++d) {
      const double left = cutoff_value(CutoffKind::Quadratic, R, r0 - eps, d);
      const double right = cutoff_value(CutoffKind::Quadratic, R, r0 + eps, d);
      CHECK(std::abs(left - right) <= 1e-3 * (1.0 + std::abs(left)));
    }
  }
}

TEST_CASE("exterior cutoff envelopes") {
  const double R = 4.0;
  CHECK(cutoff_value(CutoffKind::Exterior, R, 0.25 * R, 0) == 0.0);
  CHECK(cutoff_value(CutoffKind::Exterior, R, 2.0 * R, 0) == 1.0);
  for (int i = 0; i <= 20000; ++i) {
    const double r = 3.0 * R * static_cast<double>(i) / 20000.0;
    const double phi = cutoff_value(CutoffKind::Exterior, R, r, 0);
    CHECK(phi >= 0.0);
    CHECK(phi <= 1.0);
    const double dphi = cutoff_value(CutoffKind::Exterior, R, r, 1);
    CHECK(dphi >= 0.0);
    CHECK(dphi <= 4.0 / R + 1e-12);
  }
}

TEST_CASE("build_cutoff validates the grid reach") {
  const auto g = make_radial_grid(40.0, 1023);
  CHECK_NOTHROW(build_cutoff(CutoffKind::Quadratic, 10.0, g));
  CHECK_THROWS_AS(build_cutoff(CutoffKind::Quadratic, 25.0, g), config_error);
  CHECK_THROWS_AS(build_cutoff(CutoffKind::Exterior, 45.0, g), config_error);
  CHECK_THROWS_AS(build_cutoff(CutoffKind::Quadratic, -1.0, g), config_error);
}

TEST_CASE("virial I on the unit gaussian") {
  const auto grid = grid_of(60.0, 4095);
  const auto f = gaussian_profile(grid, 1.0, 1.0);
  // R well beyond the support: I = integral |x|^2 e^{-|x|^2} = 1.5 pi^1.5
  const auto big = build_cutoff(CutoffKind::Quadratic, 12.0, *grid);
  CHECK(virial_I(f, big) == doctest::Approx(8.352491995247561).epsilon(1e-9));
  const auto zero = zero_field(grid);
  CHECK(virial_I(zero, big) == 0.0);
  // exterior cutoff is dominated by the exterior mass past R/2
  const auto ext = build_cutoff(CutoffKind::Exterior, 4.0, *grid);
  const double ie = virial_I(f, ext);
  CHECK(ie > 0.0);
  CHECK(ie <= exterior_mass(f, 2.0) * (1.0 + 1e-9));
}

TEST_CASE("virial I' vanishes for real data and detects chirp") {
  const auto grid = grid_of(60.0, 4095);
  const auto cutoff = build_cutoff(CutoffKind::Quadratic, 12.0, *grid);
  const auto real_f = gaussian_profile(grid, 1.0, 1.0);
  CHECK(std::abs(virial_Iprime(real_f, cutoff)) < 1e-10);
  CHECK(std::abs(virial_Iprime(scale_field(real_f, std::polar(1.0, 0.7)), cutoff)) < 1e-10);

  const double beta = 0.3;
  auto chirp = real_f;
  for (std::size_t j = 0; j < chirp.size(); ++j)
    chirp.values[j] *= std::polar(1.0, beta * grid->nodes[j] * grid->nodes[j]);
  // with phi = r^2 on the support: I' = 8 pi int r^2 (2r) Im(u' conj u) dr
  //   = 32 pi beta int r^4 e^{-r^2} dr = 12 beta pi^1.5
  CHECK(virial_Iprime(chirp, cutoff) ==
        doctest::Approx(12.0 * beta * std::pow(M_PI, 1.5)).epsilon(1e-8));
}

TEST_CASE("virial I'' collapses to 4 P_k when the cutoff covers the support") {
  const auto grid = grid_of(60.0, 4095);
  const auto f = gaussian_profile(grid, 1.2, 1.0);
  const PotentialSpec pot(0.5, 1.5);
  const auto cutoff = build_cutoff(CutoffKind::Quadratic, 12.0, *grid);
  const auto s = virial_Idoubleprime(f, pot, cutoff);
  const double p4 = 4.0 * p_k(compute_moments(f, pot));
  CHECK(s.p_term == doctest::Approx(p4).epsilon(1e-12));
  CHECK(std::abs(s.r1) < 1e-9);
  CHECK(std::abs(s.r2) < 1e-9);
  CHECK(std::abs(s.r3) < 1e-9);
  CHECK(std::abs(s.r4) < 1e-9);
  CHECK(s.Idoubleprime == doctest::Approx(p4).epsilon(1e-8));
  CHECK_THROWS_AS(virial_Idoubleprime(f, pot, build_cutoff(CutoffKind::Exterior, 4.0, *grid)),
                  precondition_error);
}

TEST_CASE("sign lemmas R1 <= 0 and R3 <= 0") {
  const auto grid = grid_of(60.0, 4095);
  const PotentialSpec pot(0.7, 1.25);
  for (double R : {2.0, 4.0, 8.0}) {
    const auto cutoff = build_cutoff(CutoffKind::Quadratic, R, *grid);
    for (double width : {1.0, 3.0}) {
      auto f = gaussian_profile(grid, 1.1, width);
      for (std::size_t j = 0; j < f.size(); ++j)
        f.values[j] *= std::polar(1.0, 0.2 * grid->nodes[j] * grid->nodes[j]);
      const auto s = virial_Idoubleprime(f, pot, cutoff);
      CHECK(s.r1 <= 1e-12);
      CHECK(s.r3 <= 1e-12);
      CHECK(s.Idoubleprime ==
            doctest::Approx(s.p_term + s.r1 + s.r2 + s.r3 + s.r4).epsilon(1e-12));
    }
  }
}

TEST_CASE("remainders decay as the cutoff radius doubles") {
  const auto grid = grid_of(60.0, 4095);
  const auto f = gaussian_profile(grid, 1.0, 3.0);
  const PotentialSpec pot(0.5, 1.5);
  auto remainder_size = [&](double R) {
    const auto s = virial_Idoubleprime(f, pot, build_cutoff(CutoffKind::Quadratic, R, *grid));
    return std::abs(s.r1) + std::abs(s.r2) + std::abs(s.r3) + std::abs(s.r4);
  };
  const double r4 = remainder_size(4.0);
  const double r8 = remainder_size(8.0);
  CHECK(r4 > r8 * 2.0);
  CHECK(r8 > 0.0);
}

TEST_CASE("virial consistency guards") {
  std::vector<double> t = {0.0, 0.1, 0.2, 0.3, 0.4};
  std::vector<double> zero(5, 0.0);
  const auto rep = virial_consistency(t, zero, zero, zero);
  CHECK(rep.max_rel_err_Iprime == 0.0);
  CHECK(rep.max_rel_err_Idoubleprime == 0.0);
  CHECK_THROWS_AS(virial_consistency({0.0, 0.1, 0.25, 0.3, 0.4}, zero, zero, zero),
                  config_error);
  CHECK_THROWS_AS(virial_consistency({0.0, 0.1, 0.2}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}),
                  config_error);
  // quadratic I(t), linear I'(t), constant I'' reproduce exactly
  std::vector<double> I(5), Ip(5), Ipp(5, 2.0);
  for (int i = 0; i < 5; ++i) {
    I[i] = t[i] * t[i];
    Ip[i] = 2.0 * t[i];
  }
  const auto ok = virial_consistency(t, I, Ip, Ipp);
  CHECK(ok.max_rel_err_Iprime < 1e-12);
  CHECK(ok.max_rel_err_Idoubleprime < 1e-12);
}
