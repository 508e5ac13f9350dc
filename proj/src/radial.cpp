#include "henon/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "henon/error.hpp"
#include "henon/numerics/finite_difference.hpp"

namespace henon {

namespace {

inline double signed_pow(double w, double p) {
  if (p == 1.0) return w;
  return std::copysign(std::pow(std::abs(w), p), w);
}

}  // namespace

ShootResult lane_emden_shoot(double m, double p, const ShootOptions& opts) {
  if (!(m > 2.0)) {
    throw InvalidArgument("lane_emden_shoot: dimension must exceed 2, got " +
                          std::to_string(m));
  }
  if (!(p > 1.0) && !(opts.allow_linear && p == 1.0)) {
    throw InvalidArgument("lane_emden_shoot: p must exceed 1, got " + std::to_string(p));
  }
  const double a = opts.central_value;
  if (!(a > 0.0)) throw InvalidArgument("lane_emden_shoot: central value must be positive");

  // Series launch: w = a (1 - c r^2/(2m) + p c^2 r^4/(8m(m+2))), c = a^{p-1}.
  const double c = std::pow(a, p - 1.0);
  const double r0 = opts.r_series * std::min(1.0, 1.0 / std::sqrt(c));
  const double c2 = 1.0 / (2.0 * m);
  const double c4 = p / (8.0 * m * (m + 2.0));
  const double w0 = a * (1.0 - c * c2 * r0 * r0 + c * c * c4 * std::pow(r0, 4));
  const double dw0 = a * (-2.0 * c * c2 * r0 + 4.0 * c * c * c4 * std::pow(r0, 3));

  auto rhs = [m, p](double r, const std::array<double, 2>& y,
                    std::array<double, 2>& dy) {
    dy[0] = y[1];
    dy[1] = -(m - 1.0) / r * y[1] - signed_pow(y[0], p);
  };
  // w''' from differentiating the equation, for the slope interpolant
  auto third = [m, p](double r, double w, double dw, double d2w) {
    const double g = p == 1.0 ? 1.0 : p * std::pow(std::abs(w), p - 1.0);
    return -(m - 1.0) * (d2w / r - dw / (r * r)) - g * dw;
  };
  auto node = [&third](double r, double w, double dw, double d2w) {
    return numerics::HermiteNode{r, w, dw, d2w, third(r, w, dw, d2w)};
  };
  numerics::OdeTolerance tol{opts.tol, opts.tol};
  auto stepper = numerics::make_stepper<2>(rhs, r0, std::array<double, 2>{w0, dw0},
                                           tol, 0.1 * r0);
  // Short steps keep the quintic dense output accurate in its derivative.
  const double cap_abs = opts.max_step_abs / std::sqrt(c);
  stepper.set_max_step(cap_abs, opts.max_step_rel);

  auto traj = std::make_shared<numerics::DenseTrajectory>();
  traj->push({0.0, a, 0.0, -std::pow(a, p) / m, 0.0});
  traj->push(node(r0, w0, dw0, stepper.dydx()[1]));

  ShootResult result;
  while (stepper.advance(opts.r_max)) {
    const auto& y = stepper.y();
    if (y[0] > 0.0) {
      traj->push(node(stepper.x(), y[0], y[1], stepper.dydx()[1]));
      // |w|^p loses smoothness at the zero; shrink steps as it approaches
      if (p != 1.0 && y[1] < 0.0) {
        const double base = cap_abs + opts.max_step_rel * stepper.x();
        const double cap = std::clamp(0.05 * y[0] / -y[1], 0.01 * base, base);
        stepper.set_max_step(cap, 0.0);
      }
      continue;
    }
    // First zero lies in (x_prev, x]; bisect on the length of a single step
    // taken from the previous accepted point.
    double lo = 0.0, hi = stepper.x() - stepper.x_prev();
    const double r_tol =
        std::max(1e-12, 4.0 * std::numeric_limits<double>::epsilon() * stepper.x());
    std::array<double, 2> y_root = y;
    double w_tol = opts.tol;
    while (hi - lo > r_tol) {
      const double mid = 0.5 * (lo + hi);
      const auto ym = stepper.from_previous(mid);
      if (ym[0] > 0.0) {
        lo = mid;
      } else {
        hi = mid;
        y_root = ym;
        if (std::abs(ym[0]) <= w_tol * 1e-3) break;
      }
    }
    y_root = stepper.from_previous(hi);
    // Newton on the step length removes the bisection's last r_tol * |w'|
    for (int it = 0; it < 4 && y_root[1] != 0.0; ++it) {
      const double h_new = hi - y_root[0] / y_root[1];
      if (!(h_new > 0.0)) break;
      const auto y_new = stepper.from_previous(h_new);
      if (!(std::abs(y_new[0]) < std::abs(y_root[0]))) break;
      hi = h_new;
      y_root = y_new;
    }
    const double R0 = stepper.x_prev() + hi;
    if (std::abs(y_root[0]) > w_tol) {
      throw SolverFailure("lane_emden_shoot: zero localization missed tolerance, |w(R0)| = " +
                          std::to_string(std::abs(y_root[0])));
    }
    if (R0 > traj->x_end()) {
      traj->push(node(R0, y_root[0], y_root[1],
                      -(m - 1.0) / R0 * y_root[1] - signed_pow(y_root[0], p)));
    }
    result.R0 = R0;
    result.subcritical = true;
    break;
  }
  if (!result.subcritical && stepper.x() > traj->x_end()) {
    const auto& y = stepper.y();
    traj->push(node(stepper.x(), y[0], y[1], stepper.dydx()[1]));
  }

  result.integrator_stats = {stepper.stats().steps, stepper.stats().rejected, opts.tol};
  result.trajectory = traj;
  const double end = traj->x_end();
  std::shared_ptr<const numerics::DenseTrajectory> shared = traj;
  RadialFunction f = [shared, end](double r) {
    return shared->eval(std::clamp(r, 0.0, end));
  };
  result.profile = sample_profile(f, uniform_grid(0.0, end, opts.grid_nodes));
  result.profile.exact = std::make_shared<const RadialFunction>(f);
  result.profile.dimension = m;
  result.profile.weight_alpha = 0.0;
  result.profile.p = p;
  result.profile.central_value = a;
  result.profile.first_zero_R0 = result.R0;
  return result;
}

RadialProfile rescale_to_unit_ball(const ShootResult& shot, std::size_t grid_nodes) {
  if (!shot.subcritical || !shot.R0) {
    throw Supercritical("rescale_to_unit_ball: shot has no zero (supercritical)");
  }
  const double p = shot.profile.p;
  if (!(p > 1.0)) throw InvalidArgument("rescale_to_unit_ball: p must exceed 1");
  const double R0 = *shot.R0;
  const double scale = std::pow(R0, 2.0 / (p - 1.0));
  std::shared_ptr<const numerics::DenseTrajectory> traj = shot.trajectory;
  RadialFunction f = [traj, R0, scale](double r) -> ValueAndSlope {
    const auto w = traj->eval(std::clamp(r, 0.0, 1.0) * R0);
    return {scale * w.value, scale * R0 * w.slope};
  };
  RadialProfile v = sample_profile(f, uniform_grid(0.0, 1.0, grid_nodes));
  v.exact = std::make_shared<const RadialFunction>(f);
  v.dimension = shot.profile.dimension;
  v.weight_alpha = 0.0;
  v.p = p;
  v.central_value = v.values.front();
  v.first_zero_R0 = R0;
  return v;
}

RadialProfile solve_henon_radial(const ProblemParams& params, const RadialOptions& opts) {
  validate_pipeline(params);
  const double pc = critical_exponent(params);
  if (params.p >= pc) {
    throw Supercritical("supercritical: no radial solution for p = " +
                        std::to_string(params.p) + " >= p_alpha(N) = " +
                        std::to_string(pc));
  }
  const double m = fractional_dimension(params);
  ShootOptions so = opts.shoot;
  so.central_value = 1.0;
  const ShootResult shot = lane_emden_shoot(m, params.p, so);
  if (!shot.subcritical) {
    throw SolverFailure("solve_henon_radial: no first zero before r_max = " +
                        std::to_string(so.r_max));
  }
  const RadialProfile w = rescale_to_unit_ball(shot, opts.grid_nodes);
  return from_fractional_dimension(w, params.N, params.alpha);
}

double radial_residual_sup(const RadialProfile& v, double r_lo, double r_hi) {
  const std::size_t n = v.size();
  if (n < 8) throw InvalidArgument("radial_residual_sup: grid too small");
  const double h = (v.grid.back() - v.grid.front()) / static_cast<double>(n - 1);
  double sup = 0.0;
  for (std::size_t i = 3; i + 3 < n; ++i) {
    const double r = v.grid[i];
    if (r < r_lo || r > r_hi) continue;
    double d2 = 0.0;
    if (v.exact) {
      // The weight and |v|^p lose smoothness at the ends and the profile may
      // concentrate, so halve the stencil while the estimates still converge
      // at the expected rate, stopping once roundoff takes over.
      auto second = [&v, r](double hl) {
        std::array<double, 7> s{};
        for (int k = -3; k <= 3; ++k) s[k + 3] = (*v.exact)(r + k * hl).slope;
        return numerics::central_d1(s, 3, hl);
      };
      double hl = std::min({h, 0.1 * (r - v.grid.front()), 0.1 * (v.grid.back() - r)});
      d2 = second(hl);
      double diff_prev = std::numeric_limits<double>::infinity();
      for (int k = 0; k < 10; ++k) {
        const double next = second(0.5 * hl);
        const double diff = std::abs(next - d2);
        // sixth order: a converging halving shrinks the change ~64 fold
        if (!(diff < diff_prev / 8.0)) break;
        d2 = next;
        hl *= 0.5;
        diff_prev = diff;
      }
    } else {
      d2 = numerics::central_d1(v.dvalues, i, h);
    }
    const double res = d2 + (v.dimension - 1.0) / r * v.dvalues[i] +
                       std::pow(r, v.weight_alpha) * signed_pow(v.values[i], v.p);
    sup = std::max(sup, std::abs(res));
  }
  return sup;
}

}  // namespace henon
