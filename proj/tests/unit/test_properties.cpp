#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "henon/analysis.hpp"
#include "henon/domain_map.hpp"
#include "henon/perturbed.hpp"
#include "henon/problem.hpp"
#include "henon/radial.hpp"
#include "henon/spectrum.hpp"

using namespace henon;

namespace {

// Random subcritical problems: p = 1 + f (p_alpha(N) - 1).
struct ParamGen {
  std::mt19937 gen;
  int n_lo = 3, n_hi = 6;
  double a_hi = 4.0, f_lo = 0.25, f_hi = 0.98;

  explicit ParamGen(unsigned seed) : gen(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen); }
  ProblemParams next() {
    const int N = std::uniform_int_distribution<int>(n_lo, n_hi)(gen);
    const double alpha = uniform(0.0, a_hi);
    const double f = uniform(f_lo, f_hi);
    return {N, alpha, 1.0 + f * (critical_exponent(N, alpha) - 1.0)};
  }
};

}  // namespace

// Largest term of the equation, r^alpha v^p, over the grid.
double equation_scale(const RadialProfile& v) {
  double scale = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    scale = std::max(scale, std::pow(v.grid[i], v.weight_alpha) * std::pow(v.values[i], v.p));
  }
  return scale;
}

TEST_CASE("radial solutions satisfy their equation and boundary condition") {
  ParamGen g(2024);
  int absolute = 0;
  for (int n = 0; n < 60; ++n) {
    const ProblemParams pp = g.next();
    CAPTURE(pp.N);
    CAPTURE(pp.alpha);
    CAPTURE(pp.p);
    const RadialProfile v = solve_henon_radial(pp);
    // beyond v(0) ~ 1e4 an absolute 1e-7 is below the rounding of the terms
    if (v.central_value <= 1e4) {
      CHECK(radial_residual_sup(v) <= 1e-7);
      ++absolute;
    } else {
      CHECK(radial_residual_sup(v) <= 1e-11 * equation_scale(v));
    }
    CHECK(std::abs(v.values.back()) <= 1e-10);
    CHECK(v.dvalues.front() == 0.0);
    bool positive = true, decreasing = true;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      positive &= v.values[i] > 0.0;
      // values near the origin agree to the last bit for large alpha
      decreasing &= v.values[i + 1] <= v.values[i] && v.dvalues[i + 1] < 0.0;
    }
    CHECK(positive);
    CHECK(decreasing);
  }
  CHECK(absolute >= 50);
}

TEST_CASE("near p = 1 the residual is small relative to the profile scale") {
  // v(0) grows like R0^{2/(p-1)}, so only a scale-relative bound is meaningful
  ParamGen g(77);
  g.f_lo = 0.05;
  g.f_hi = 0.25;
  for (int n = 0; n < 30; ++n) {
    const ProblemParams pp = g.next();
    CAPTURE(pp.N);
    CAPTURE(pp.alpha);
    CAPTURE(pp.p);
    const RadialProfile v = solve_henon_radial(pp);
    CHECK(radial_residual_sup(v) <= 1e-9 * equation_scale(v));
    CHECK(std::abs(v.values.back()) <= 1e-10 * v.central_value);
  }
}

TEST_CASE("exponent identities") {
  ParamGen g(5);
  for (int n = 0; n < 200; ++n) {
    const int N = std::uniform_int_distribution<int>(3, 9)(g.gen);
    const double a = g.uniform(0.0, 6.0);
    const double m = fractional_dimension(N, a);
    // the weighted critical exponent is the Sobolev exponent of dimension N(alpha)
    CHECK(critical_exponent(N, a) == doctest::Approx((m + 2.0) / (m - 2.0)).epsilon(1e-13));
    CHECK(m <= N + 1e-12);
    const double p = g.uniform(sobolev_exponent(N) + 1e-3, 3.0 * sobolev_exponent(N));
    const double astar = alpha_for_fast_decay(N, p);
    CHECK(std::abs(kelvin_beta({N, astar, p})) <= 1e-12);
    CHECK(p < critical_exponent(N, astar));
    CHECK(pohozaev_coefficient({N, a, critical_exponent(N, a)}) == doctest::Approx(0.0).scale(1.0));
  }
}

TEST_CASE("change of variables round trip") {
  ParamGen g(9);
  for (int n = 0; n < 20; ++n) {
    const ProblemParams pp = g.next();
    const RadialProfile u = solve_henon_radial(pp);
    const RadialProfile back = from_fractional_dimension(to_fractional_dimension(u), pp.N, pp.alpha);
    double err = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(back.values[i] - u.values[i]));
    CHECK(err <= 1e-9 * u.central_value);
  }
}

TEST_CASE("Pohozaev balance across random problems") {
  ParamGen g(31);
  for (int n = 0; n < 30; ++n) {
    const ProblemParams pp = g.next();
    CAPTURE(pp.N);
    CAPTURE(pp.alpha);
    CAPTURE(pp.p);
    CHECK(pohozaev_residual(solve_henon_radial(pp), pp).relative_residual <= 1e-6);
  }
}

TEST_CASE("two oracles for nu on random problems") {
  ParamGen g(41);
  g.n_hi = 5;
  for (int n = 0; n < 10; ++n) {
    const ProblemParams pp = g.next();
    CAPTURE(pp.N);
    CAPTURE(pp.alpha);
    CAPTURE(pp.p);
    const SpectralSample s = spectral_sample(pp.N, pp.alpha, pp.p);
    REQUIRE(s.ok);
    CHECK(s.gap <= 1e-6);
    CHECK(s.nu < 0.0);
    CHECK(s.second >= -1e-8);
    const RadialProfile v = solve_henon_radial(pp);
    CHECK(std::abs(mode_shoot(v, 0).boundary_value) > 1e-3);
  }
}

TEST_CASE("certificate eps bound and monotonicity") {
  ParamGen g(53);
  for (int n = 0; n < 20; ++n) {
    const double alpha = g.uniform(0.1, 4.0);
    const double p = g.uniform(5.2, 9.0);
    double prev = INFINITY;
    for (double shift : {10.0, 100.0, 1000.0}) {
      const auto r = nonexistence_certificate(DomainSpec::ball(), shift, {3, alpha, p});
      const double gm = 1.0 / shift;
      CHECK(r.eps_sup <= alpha * gm * (1.0 + gm) / ((1.0 - gm) * (1.0 - gm)) + 1e-15);
      CHECK(r.eps_sup <= prev);
      prev = r.eps_sup;
      if (r.verdict == CertificateVerdict::certified_nonexistence) CHECK(r.margin > 0.0);
    }
  }
}

TEST_CASE("inverse maps of random bumps") {
  ParamGen g(61);
  for (int n = 0; n < 20; ++n) {
    std::array<double, 5> c{};
    for (double& x : c) x = g.uniform(-1.0, 1.0);
    DomainMapSpec spec = DomainMapSpec::bump(c, 0.0);
    spec.t = 0.5 / lipschitz_estimate(spec) * g.uniform(0.0, 1.0);
    std::vector<Vec3> ys;
    for (int k = 0; k < 20; ++k) {
      const double r = g.uniform(0.0, 1.0), th = g.uniform(0.0, std::numbers::pi), ph = g.uniform(0.0, 2.0 * std::numbers::pi);
      ys.push_back({r * std::sin(th) * std::cos(ph), r * std::sin(th) * std::sin(ph), r * std::cos(th)});
    }
    const InverseMapField f = invert_map(spec, ys);
    CHECK(f.max_roundtrip <= 1e-10);
  }
}

TEST_CASE("L_t is linear in v") {
  ParamGen g(67);
  const DomainMapSpec spec = DomainMapSpec::bump({0.3, -0.2, 0.5, 0.1, 0.0}, 0.02);
  const auto field = invert_map(spec, {{0.1, 0.2, 0.3}, {-0.5, 0.1, 0.2}, {0.0, 0.0, 0.7}});
  for (int n = 0; n < 20; ++n) {
    auto rand_jet = [&](Vec3& gr, Mat3& h) {
      for (int a = 0; a < 3; ++a) {
        gr[a] = g.uniform(-1, 1);
        for (int b = a; b < 3; ++b) h[a][b] = h[b][a] = g.uniform(-1, 1);
      }
    };
    Vec3 g1{}, g2{};
    Mat3 h1{}, h2{};
    rand_jet(g1, h1);
    rand_jet(g2, h2);
    const double s = g.uniform(-2, 2);
    Vec3 g3{};
    Mat3 h3{};
    for (int a = 0; a < 3; ++a) {
      g3[a] = g1[a] + s * g2[a];
      for (int b = 0; b < 3; ++b) h3[a][b] = h1[a][b] + s * h2[a][b];
    }
    for (const auto& q : field.points) {
      const double lhs = lt_apply(q, spec.t, g3, h3);
      const double rhs = lt_apply(q, spec.t, g1, h1) + s * lt_apply(q, spec.t, g2, h2);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1e-12));
    }
  }
}

TEST_CASE("Legendre synthesis and projection are inverse") {
  ParamGen g(71);
  const AxisymmetricGrid grid = AxisymmetricGrid::make(12, 16);
  for (int n = 0; n < 10; ++n) {
    HarmonicField f = HarmonicField::zeros(grid);
    for (auto& m : f.modes)
      for (double& a : m) a = g.uniform(-1, 1);
    const HarmonicField back = project(f.synthesize(grid), grid);
    for (std::size_t k = 0; k < f.modes.size(); ++k)
      for (std::size_t i = 0; i < grid.nr(); ++i) CHECK(back.modes[k][i] == doctest::Approx(f.modes[k][i]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("Kelvin involution on random fast-decay problems") {
  ParamGen g(83);
  for (int n = 0; n < 10; ++n) {
    const int N = std::uniform_int_distribution<int>(3, 5)(g.gen);
    const double p = g.uniform(sobolev_exponent(N) + 0.1, sobolev_exponent(N) + 3.0);
    const ProblemParams pp{N, alpha_for_fast_decay(N, p), p};
    const RadialProfile v = solve_henon_radial(pp);
    const ExteriorProfile e = kelvin_exterior(v, pp);
    CHECK(std::abs(e.boundary_value) <= 1e-10 * v.central_value);
    CHECK(e.min_value > 0.0);
    const InteriorSamples back = kelvin_interior(e);
    double err = 0.0;
    for (std::size_t j = 0; j < back.r.size(); ++j) err = std::max(err, std::abs(back.v[j] - v.value(back.r[j])));
    CHECK(err <= 1e-8 * v.central_value);
  }
}
