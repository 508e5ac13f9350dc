#include <doctest.h>

#include <cmath>

#include "henon/error.hpp"
#include "henon/problem.hpp"
#include "henon/radial.hpp"

using namespace henon;

TEST_CASE("critical exponent") {
  CHECK(critical_exponent(3, 1.0) == doctest::Approx(7.0).epsilon(1e-15));
  CHECK(critical_exponent(3, 0.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(critical_exponent(5, 2.0) == doctest::Approx(11.0 / 3.0).epsilon(1e-15));
  CHECK(sobolev_exponent(4) == doctest::Approx(3.0));
  CHECK_THROWS_AS(critical_exponent(2, 1.0), InvalidArgument);
}

TEST_CASE("fractional dimension") {
  CHECK(fractional_dimension(3, 2.0) == doctest::Approx(2.5));
  CHECK(fractional_dimension(4, 0.0) == doctest::Approx(4.0));
  CHECK(fractional_dimension(3, 1.0) == doctest::Approx(8.0 / 3.0));
  CHECK_THROWS_AS(fractional_dimension(3, -2.0), InvalidArgument);
  CHECK_THROWS_AS(fractional_dimension(3, -3.0), InvalidArgument);
  // transforms accept alpha in (-2, 0)
  CHECK(fractional_dimension(3, -1.0) == doctest::Approx(4.0));
}

TEST_CASE("kelvin beta and fast-decay weight") {
  CHECK(kelvin_beta({3, 1.0, 6.0}) == 0.0);
  CHECK(kelvin_beta({3, 0.0, 5.0}) == 0.0);
  CHECK(kelvin_beta({5, 1.0, 3.0}) == doctest::Approx(1.0));
  CHECK(alpha_for_fast_decay(3, 6.0) == doctest::Approx(1.0));
  CHECK(alpha_for_fast_decay(4, 4.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(alpha_for_fast_decay(3, 5.0), InvalidArgument);
  CHECK_THROWS_AS(alpha_for_fast_decay(3, 4.0), InvalidArgument);
  // p < p_{alpha*}(N)
  for (double p : {5.5, 6.0, 9.0}) {
    const double a = alpha_for_fast_decay(3, p);
    CHECK(p < critical_exponent(3, a));
  }
}

TEST_CASE("pipeline validation") {
  CHECK_NOTHROW(validate_pipeline({3, 0.0, 2.0}));
  CHECK_THROWS_AS(validate_pipeline({2, 1.0, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(validate_pipeline({3, -0.5, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(validate_pipeline({3, 1.0, 1.0}), InvalidArgument);
}

TEST_CASE("spherical spectrum") {
  const auto s = spherical_spectrum(3, 5);
  REQUIRE(s.entries.size() == 6);
  CHECK(s.entries[0].lambda == 0.0);
  CHECK(s.entries[1].lambda == 2.0);
  CHECK(s.entries[1].multiplicity == 3);
  CHECK(s.entries[0].multiplicity == 1);
  CHECK(s.entries[2].multiplicity == 5);
  for (std::size_t k = 1; k < s.entries.size(); ++k) {
    CHECK(s.entries[k].lambda > s.entries[k - 1].lambda);
    CHECK(s.entries[k].lambda == doctest::Approx(k * (k + 1.0)));
  }
  CHECK(sphere_eigenvalue(4, 1) == 3.0);
  CHECK(spherical_spectrum(4, 2).entries[1].multiplicity == 4);
  CHECK(spherical_spectrum(4, 2).entries[2].multiplicity == 9);
}

TEST_CASE("change of variables: identity and zero") {
  // alpha = 0 is the identity on a solution profile
  const RadialProfile v = solve_henon_radial({3, 0.0, 3.0});
  const RadialProfile w = to_fractional_dimension(v);
  CHECK(w.dimension == doctest::Approx(3.0));
  for (std::size_t i = 0; i < v.size(); i += 100) {
    CHECK(w.values[i] == doctest::Approx(v.values[i]).epsilon(1e-12));
  }
  const RadialProfile back = from_fractional_dimension(w, 3, 0.0);
  for (std::size_t i = 0; i < v.size(); i += 100) {
    CHECK(back.values[i] == doctest::Approx(v.values[i]).epsilon(1e-12));
  }

  RadialProfile zero = sample_profile([](double) { return ValueAndSlope{0.0, 0.0}; },
                                      uniform_grid(0.0, 1.0, 101));
  zero.dimension = 3.0;
  zero.weight_alpha = 2.0;
  zero.p = 2.0;
  const RadialProfile z = to_fractional_dimension(zero);
  for (double x : z.values) CHECK(x == 0.0);
  const RadialProfile zb = from_fractional_dimension(z, 3, 2.0);
  for (double x : zb.values) CHECK(x == 0.0);
}

TEST_CASE("change of variables round trip on a shooting solution") {
  const RadialProfile u = solve_henon_radial({3, 2.0, 2.0});
  const RadialProfile w = to_fractional_dimension(u);
  CHECK(w.dimension == doctest::Approx(2.5));
  CHECK(w.weight_alpha == 0.0);
  const RadialProfile back = from_fractional_dimension(w, 3, 2.0);
  double err = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(back.values[i] - u.values[i]));
  CHECK(err <= 1e-8);
  CHECK_THROWS_AS(from_fractional_dimension(w, 3, 1.0), InvalidArgument);
}
