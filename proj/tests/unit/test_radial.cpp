#include <doctest.h>

#include <cmath>
#include <numbers>

#include "collocation.hpp"
#include "henon/error.hpp"
#include "henon/radial.hpp"

using namespace henon;

namespace {

ShootOptions linear_mode() {
  ShootOptions o;
  o.allow_linear = true;
  return o;
}

}  // namespace

TEST_CASE("linear test mode: first zero of sin(r)/r") {
  const ShootResult s = lane_emden_shoot(3.0, 1.0, linear_mode());
  REQUIRE(s.R0);
  CHECK(std::abs(*s.R0 - std::numbers::pi) <= 1e-8);
  CHECK(s.subcritical);
  CHECK(s.integrator_stats.steps > 0);
  for (double r : {0.5, 1.0, 2.0, 3.0}) {
    CHECK(s.profile.value(r) == doctest::Approx(std::sin(r) / r).epsilon(1e-9));
  }
}

TEST_CASE("critical Lane-Emden profile has no zero") {
  ShootOptions o;
  o.r_max = 10.0;
  const ShootResult s = lane_emden_shoot(3.0, 5.0, o);
  CHECK_FALSE(s.subcritical);
  CHECK_FALSE(s.R0);
  double err = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double r = 10.0 * i / 1000.0;
    err = std::max(err, std::abs(s.profile.value(r) - 1.0 / std::sqrt(1.0 + r * r / 3.0)));
  }
  CHECK(err <= 1e-8);
}

TEST_CASE("Lane-Emden index 3") {
  const ShootResult s = lane_emden_shoot(3.0, 3.0);
  REQUIRE(s.R0);
  CHECK(*s.R0 == doctest::Approx(6.89684862).epsilon(1e-8));
  CHECK(std::abs(s.profile.value(*s.R0)) <= 1e-12);
}

TEST_CASE("shooting rejects bad input") {
  CHECK_THROWS_AS(lane_emden_shoot(2.0, 3.0), InvalidArgument);
  CHECK_THROWS_AS(lane_emden_shoot(3.0, 1.0), InvalidArgument);
  ShootOptions o;
  o.central_value = 0.0;
  CHECK_THROWS_AS(lane_emden_shoot(3.0, 3.0, o), InvalidArgument);
}

TEST_CASE("rescaling to the unit ball") {
  const ShootResult s = lane_emden_shoot(3.0, 3.0);
  const RadialProfile v = rescale_to_unit_ball(s);
  CHECK(v.values.front() == doctest::Approx(*s.R0).epsilon(1e-12));
  CHECK(std::abs(v.values.back()) <= 1e-10);
  CHECK(radial_residual_sup(v) <= 1e-8);

  ShootOptions o;
  o.r_max = 10.0;
  CHECK_THROWS_AS(rescale_to_unit_ball(lane_emden_shoot(3.0, 5.0, o)), Supercritical);
}

TEST_CASE("rescaling with R0 = 1 is the identity") {
  // central value a gives R0(a) = R0(1) a^{-(p-1)/2}; choose a so R0 = 1
  const double p = 3.0;
  const double R1 = *lane_emden_shoot(3.0, p).R0;
  ShootOptions o;
  o.central_value = std::pow(R1, 2.0 / (p - 1.0));
  const ShootResult s = lane_emden_shoot(3.0, p, o);
  REQUIRE(s.R0);
  CHECK(*s.R0 == doctest::Approx(1.0).epsilon(1e-9));
  const RadialProfile v = rescale_to_unit_ball(s);
  for (double r : {0.0, 0.25, 0.5, 0.9}) {
    CHECK(v.value(r) == doctest::Approx(s.profile.value(r)).epsilon(1e-8));
  }
}

TEST_CASE("scaling law of the first zero") {
  for (double p : {2.0, 3.0, 4.5}) {
    const double R1 = *lane_emden_shoot(3.0, p).R0;
    for (double a : {0.5, 2.0, 4.0}) {
      ShootOptions o;
      o.central_value = a;
      const double Ra = *lane_emden_shoot(3.0, p, o).R0;
      CHECK(std::abs(Ra - R1 * std::pow(a, -(p - 1.0) / 2.0)) <= 1e-6);
    }
  }
}

TEST_CASE("weighted radial solutions") {
  SUBCASE("alpha = 0 reduces to Lane-Emden") {
    const RadialProfile v = solve_henon_radial({3, 0.0, 3.0});
    CHECK(v.central_value == doctest::Approx(6.8968486).epsilon(1e-7));
  }
  SUBCASE("alpha = 2 uses dimension 2.5") {
    const RadialProfile v = solve_henon_radial({3, 2.0, 3.0});
    const ShootResult s = lane_emden_shoot(2.5, 3.0);
    const RadialProfile w = rescale_to_unit_ball(s);
    const RadialProfile back = from_fractional_dimension(w, 3, 2.0);
    for (double r : {0.0, 0.3, 0.6, 0.95}) {
      CHECK(v.value(r) == doctest::Approx(back.value(r)).epsilon(1e-9));
    }
  }
  SUBCASE("supercritical") {
    CHECK_THROWS_AS(solve_henon_radial({3, 1.0, 7.0}), Supercritical);
    CHECK_THROWS_AS(solve_henon_radial({3, 1.0, 8.0}), Supercritical);
    try {
      solve_henon_radial({3, 1.0, 7.0});
    } catch (const Supercritical& e) {
      CHECK(std::string(e.what()).find("supercritical") != std::string::npos);
      CHECK(e.exit_code() == ExitCode::invalid_config);
    }
  }
}

TEST_CASE("solution profile invariants") {
  for (const ProblemParams& pp : {ProblemParams{3, 1.0, 5.0}, ProblemParams{4, 0.5, 2.5},
                                  ProblemParams{5, 2.0, 1.5}, ProblemParams{3, 2.05, 8.5}}) {
    CAPTURE(pp.N);
    CAPTURE(pp.alpha);
    CAPTURE(pp.p);
    const RadialProfile v = solve_henon_radial(pp);
    CHECK(v.dvalues.front() == 0.0);
    CHECK(std::abs(v.values.back()) <= 1e-10);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) CHECK(v.values[i] > 0.0);
    bool decreasing = true;
    for (std::size_t i = 1; i < v.size(); ++i) decreasing &= v.dvalues[i] < 0.0;
    CHECK(decreasing);
    CHECK(radial_residual_sup(v) <= 1e-7);
    CHECK(v.dimension == doctest::Approx(pp.N));
    CHECK(v.weight_alpha == pp.alpha);
  }
}

TEST_CASE("collocation oracle agrees with the transform-based solution") {
  for (const ProblemParams& pp : {ProblemParams{3, 2.0, 3.0}, ProblemParams{4, 1.0, 2.5}}) {
    const auto col = oracle::solve_weighted_radial(pp.N, pp.alpha, pp.p);
    REQUIRE(col);
    const RadialProfile v = solve_henon_radial(pp);
    double err = 0.0;
    for (int i = 0; i <= 500; ++i) {
      const double r = i / 500.0;
      err = std::max(err, std::abs(col->value(r) - v.value(r)));
    }
    CHECK(err <= 1e-6);
  }
}
