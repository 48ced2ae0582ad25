#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/grid.hpp"

using namespace nlslab;

namespace {

MomentSet gaussian_moments(double amplitude, double k, double alpha) {
  // closed forms for amplitude * exp(-r^2/2)
  const double c2 = amplitude * amplitude;
  MomentSet m;
  m.mass = c2 * std::pow(M_PI, 1.5);
  m.kinetic = 1.5 * m.mass;
  m.quartic = c2 * c2 * std::pow(0.5 * M_PI, 1.5);
  m.v_moment = 2.0 * M_PI * k * std::tgamma(0.5 * (3.0 - alpha)) * c2;
  m.xgradv_moment = -alpha * m.v_moment;
  return m;
}

}  // namespace

TEST_CASE("scale pair admissibility") {
  CHECK_NOTHROW(ScalePair(3.0, -2.0));
  CHECK_NOTHROW(ScalePair(1.0, 0.0));
  CHECK_THROWS_AS(ScalePair(-1.0, 0.0), config_error);
  CHECK_THROWS_AS(ScalePair(1.0, 1.0), config_error);   // b > 0
  CHECK_THROWS_AS(ScalePair(1.0, -1.0), config_error);  // 2a+3b < 0
  CHECK(ScalePair(3.0, -2.0).mu_bar() == doctest::Approx(4.0));
  CHECK(ScalePair(3.0, -2.0).mu_under() == doctest::Approx(0.0));
}

TEST_CASE("energy and action algebra") {
  const auto m = gaussian_moments(1.0, 0.5, 1.5);
  CHECK(energy(m) ==
        doctest::Approx(0.5 * m.kinetic + 0.5 * m.v_moment - 0.25 * m.quartic));
  CHECK(action(m) == doctest::Approx(energy(m) + 0.5 * m.mass));
  CHECK(h1k_norm_sq(m) == doctest::Approx(m.kinetic + m.v_moment + m.mass));
}

TEST_CASE("k_ab is the derivative of the scaled action") {
  const auto m = gaussian_moments(1.3, 0.8, 1.25);
  for (const ScalePair s : {ScalePair(3.0, -2.0), ScalePair(3.0, 0.0), ScalePair(1.0, 0.0),
                            ScalePair(2.0, -1.0)}) {
    const double eps = 1e-6;
    const double fd =
        (scaled_action(m, s, eps, 1.25) - scaled_action(m, s, -eps, 1.25)) / (2.0 * eps);
    CHECK(k_ab(m, s) == doctest::Approx(fd).epsilon(1e-8));
  }
  // scaled moments obey the four power laws
  const ScalePair s(3.0, -2.0);
  const auto ms = scaled_moments(m, s, 0.3, 1.25);
  CHECK(ms.mass == doctest::Approx(m.mass));
  CHECK(ms.kinetic == doctest::Approx(m.kinetic * std::exp(4.0 * 0.3)));
  CHECK(ms.quartic == doctest::Approx(m.quartic * std::exp(6.0 * 0.3)));
  CHECK(ms.v_moment == doctest::Approx(m.v_moment * std::exp(2.0 * 1.25 * 0.3)));
}

TEST_CASE("specialization identities") {
  const auto m = gaussian_moments(2.0, 0.4, 1.5);
  CHECK(p_k(m) == doctest::Approx(k_ab(m, ScalePair(3.0, -2.0))).epsilon(1e-13));
  CHECK(i_k(m) == doctest::Approx(k_ab(m, ScalePair(3.0, 0.0)) / 3.0).epsilon(1e-13));
  CHECK(p_k(m) == doctest::Approx(2.0 * m.kinetic + 1.5 * m.v_moment - 1.5 * m.quartic));
}

TEST_CASE("j_ab positivity and monotonicity") {
  for (double amp : {0.2, 1.0, 3.0}) {
    const auto m = gaussian_moments(amp, 0.6, 1.5);
    for (const ScalePair s : {ScalePair(3.0, -2.0), ScalePair(1.0, 0.0), ScalePair(2.0, -1.0)}) {
      CHECK(j_ab(m, s) > 0.0);
      double prev = j_ab(scaled_moments(m, s, -1.0, 1.5), s);
      for (double lam = -0.8; lam <= 1.01; lam += 0.2) {
        const double cur = j_ab(scaled_moments(m, s, lam, 1.5), s);
        CHECK(cur >= prev - 1e-12 * std::abs(cur));
        prev = cur;
      }
    }
  }
  // (1,0) specialization collapses to a quarter of the quartic moment
  const auto m = gaussian_moments(1.7, 0.9, 2.0);
  CHECK(j_ab(m, ScalePair(1.0, 0.0)) == doctest::Approx(0.25 * m.quartic).epsilon(1e-13));
}

TEST_CASE("classification against the threshold") {
  const double n0 = 18.897;
  const auto small = make_report(gaussian_moments(0.1, 0.5, 1.5));
  CHECK(classify(small, n0).tag == SetTag::N_PLUS);
  const auto big = make_report(gaussian_moments(4.3, 0.5, 1.5));
  CHECK(big.action < n0);
  CHECK(big.p < 0.0);
  CHECK(classify(big, n0).tag == SetTag::N_MINUS);
  // wide state: action far above threshold
  MomentSet wide = gaussian_moments(1.0, 0.0, 1.5);
  wide.mass *= 64.0;
  wide.kinetic *= 16.0;
  wide.quartic *= 64.0;
  const auto outside = make_report(wide);
  CHECK(outside.action > n0);
  CHECK(classify(outside, n0).tag == SetTag::OUTSIDE);
  CHECK_THROWS_AS(classify(small, -1.0), precondition_error);
}

TEST_CASE("bound checks carry signed slack") {
  const double n0 = 18.897;
  const auto plus = make_report(gaussian_moments(0.1, 0.25, 1.5));
  CHECK(check_p_lower_bound(plus, n0).passed);
  CHECK(h1k_equivalence_check(plus, n0).passed);
  const auto minus = make_report(gaussian_moments(4.3, 0.25, 1.5));
  CHECK(check_p_upper_bound(minus, n0).passed);
  CHECK(check_p_upper_bound(minus, n0).slack >= 0.0);
}

TEST_CASE("gn quotient") {
  const auto m = gaussian_moments(1.0, 0.0, 1.5);
  CHECK(gn_quotient(m) ==
        doctest::Approx(m.quartic / (std::sqrt(m.mass) * std::pow(m.kinetic, 1.5))));
  MomentSet zero;
  CHECK_THROWS_AS(gn_quotient(zero), precondition_error);
}

TEST_CASE("functional report serializes") {
  const auto rep = make_report(gaussian_moments(1.0, 0.5, 1.5));
  const auto j = nlohmann::json::parse(report_to_json(rep));
  CHECK(j["action"].get<double>() == doctest::Approx(rep.action));
  CHECK(j["moments"]["mass"].get<double>() == doctest::Approx(rep.moments.mass));
}
