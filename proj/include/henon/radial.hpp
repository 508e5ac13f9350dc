#pragma once

// Positive radial solutions on the unit ball, built by shooting the pure
// Lane-Emden equation w'' + (m-1) w'/r + |w|^{p-1} w = 0 in a possibly
// fractional dimension m and mapping back to the weighted problem.

#include <cstddef>
#include <memory>
#include <optional>

#include "henon/numerics/ode.hpp"
#include "henon/problem.hpp"
#include "henon/profile.hpp"

namespace henon {

struct ShootOptions {
  double tol = 1e-12;          // rtol = atol of the integrator; also |w(R0)| target
  double r_series = 1e-3;      // end of the series launch
  double r_max = 1e8;          // no zero before this means supercritical
  double central_value = 1.0;  // w(0)
  double max_step_abs = 0.0005; // step cap abs + rel * r, for the dense output
  double max_step_rel = 0.0005;
  std::size_t grid_nodes = 2001;
  bool allow_linear = false;   // accept p = 1 (w'' + (m-1) w'/r + w = 0), for tests
};

struct IntegratorStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  double tolerance = 0.0;
};

struct ShootResult {
  RadialProfile profile;  // w on [0, R0], or on [0, r_max] when no zero
  std::optional<double> R0;
  bool subcritical = false;
  IntegratorStats integrator_stats;
  std::shared_ptr<const numerics::DenseTrajectory> trajectory;
};

ShootResult lane_emden_shoot(double m, double p, const ShootOptions& opts = {});

// v(r) = R0^{2/(p-1)} w(R0 r) on [0, 1], so v(1) = 0.
RadialProfile rescale_to_unit_ball(const ShootResult& shot,
                                   std::size_t grid_nodes = 2001);

struct RadialOptions {
  ShootOptions shoot;
  std::size_t grid_nodes = 2001;
};

// v_p for -Laplace v = r^alpha v^p on the unit ball in R^N, v(1) = 0. Throws
// Supercritical when p >= p_alpha(N).
RadialProfile solve_henon_radial(const ProblemParams& params,
                                 const RadialOptions& opts = {});

// sup over grid nodes with r in [r_lo, r_hi] of
// |v'' + (dimension - 1) v'/r + r^alpha |v|^{p-1} v|, with v'' from sixth
// order differences of v'. With an exact evaluator the stencil is taken from it
// and shortened near the ends; otherwise it uses the stored samples (uniform
// grid assumed).
double radial_residual_sup(const RadialProfile& v, double r_lo = 0.01,
                           double r_hi = 0.99);

}  // namespace henon
