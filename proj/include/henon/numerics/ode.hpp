#pragma once

// Adaptive Dormand-Prince 5(4) stepping for small fixed-size systems, plus a
// quintic Hermite dense trajectory for scalar second order equations.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "henon/error.hpp"

namespace henon::numerics {

struct OdeTolerance {
  double rtol = 1e-12;
  double atol = 1e-12;
};

struct OdeStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
};

template <std::size_t D, class Rhs>
class AdaptiveStepper {
 public:
  using State = std::array<double, D>;

  AdaptiveStepper(Rhs rhs, double x0, const State& y0, OdeTolerance tol,
                  double h0)
      : rhs_(std::move(rhs)), tol_(tol), x_(x0), y_(y0), h_(h0) {
    rhs_(x_, y_, dydx_);
    x_prev_ = x_;
    y_prev_ = y_;
    dydx_prev_ = dydx_;
  }

  double x() const { return x_; }
  const State& y() const { return y_; }
  const State& dydx() const { return dydx_; }
  double x_prev() const { return x_prev_; }
  const State& y_prev() const { return y_prev_; }
  const State& dydx_prev() const { return dydx_prev_; }
  const OdeStats& stats() const { return stats_; }
  double step_size() const { return h_; }

  // Caps every step at abs + rel * |x|.
  void set_max_step(double abs, double rel) {
    h_max_abs_ = abs;
    h_max_rel_ = rel;
  }

  // Takes one accepted step without passing x_limit. Returns false when
  // already at x_limit.
  bool advance(double x_limit) {
    if (x_ >= x_limit) return false;
    for (;;) {
      const double h_cap = h_max_abs_ + h_max_rel_ * std::abs(x_);
      double h = std::min({h_, h_cap, x_limit - x_});
      const double h_min = 1e-15 * std::max(1.0, std::abs(x_));
      if (h < h_min) {
        throw SolverFailure("ode: step size underflow at x = " +
                            std::to_string(x_));
      }
      State y_new{}, err{}, k7{};
      trial(x_, y_, dydx_, h, y_new, err, k7);
      double norm = 0.0;
      for (std::size_t i = 0; i < D; ++i) {
        const double sc =
            tol_.atol + tol_.rtol * std::max(std::abs(y_[i]), std::abs(y_new[i]));
        norm += (err[i] / sc) * (err[i] / sc);
      }
      norm = std::sqrt(norm / static_cast<double>(D));
      if (!std::isfinite(norm)) {
        ++stats_.rejected;
        h_ = 0.2 * h;
        continue;
      }
      const double factor =
          norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
      if (norm <= 1.0) {
        x_prev_ = x_;
        y_prev_ = y_;
        dydx_prev_ = dydx_;
        x_ = (h == x_limit - x_) ? x_limit : x_ + h;
        y_ = y_new;
        dydx_ = k7;
        ++stats_.steps;
        // only grow the step if the accepted one was not clipped by x_limit
        if (h == h_ || h == h_cap || factor < 1.0) h_ = h * factor;
        return true;
      }
      ++stats_.rejected;
      h_ = h * std::max(0.2, factor);
    }
  }

  // A single unrejected step of size h from the previous accepted point; used
  // to localize events inside the last accepted step.
  State from_previous(double h) const {
    State y_new{}, err{}, k7{};
    trial(x_prev_, y_prev_, dydx_prev_, h, y_new, err, k7);
    return y_new;
  }

 private:
  void trial(double x, const State& y, const State& k1, double h, State& y_new,
             State& err, State& k7) const {
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0,
                            a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0,
                            b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                            b6 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                            e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                            e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    State k2{}, k3{}, k4{}, k5{}, k6{}, tmp{};
    for (std::size_t i = 0; i < D; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    rhs_(x + h / 5.0, tmp, k2);
    for (std::size_t i = 0; i < D; ++i)
      tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs_(x + 0.3 * h, tmp, k3);
    for (std::size_t i = 0; i < D; ++i)
      tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs_(x + 0.8 * h, tmp, k4);
    for (std::size_t i = 0; i < D; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs_(x + 8.0 * h / 9.0, tmp, k5);
    for (std::size_t i = 0; i < D; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                           a64 * k4[i] + a65 * k5[i]);
    rhs_(x + h, tmp, k6);
    for (std::size_t i = 0; i < D; ++i)
      y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                             b5 * k5[i] + b6 * k6[i]);
    rhs_(x + h, y_new, k7);
    for (std::size_t i = 0; i < D; ++i)
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                    e6 * k6[i] + e7 * k7[i]);
  }

  mutable Rhs rhs_;
  OdeTolerance tol_;
  double x_;
  State y_;
  State dydx_{};
  double h_;
  double h_max_abs_ = std::numeric_limits<double>::infinity();
  double h_max_rel_ = 0.0;
  double x_prev_;
  State y_prev_{};
  State dydx_prev_{};
  OdeStats stats_;
};

template <std::size_t D, class Rhs>
AdaptiveStepper<D, Rhs> make_stepper(Rhs rhs, double x0,
                                     const std::array<double, D>& y0,
                                     OdeTolerance tol, double h0) {
  return AdaptiveStepper<D, Rhs>(std::move(rhs), x0, y0, tol, h0);
}

struct HermiteNode {
  double x;
  double f;
  double df;
  double d2f;
  // Optional third derivative. When both ends of an interval carry it, the
  // slope is interpolated from (df, d2f, d3f) alone, which avoids the
  // cancellation in (f_b - f_a) / h on short steps.
  double d3f = std::numeric_limits<double>::quiet_NaN();
};

struct ValueAndSlope {
  double value;
  double slope;
};

// Piecewise quintic Hermite interpolant through (f, f', f'') at increasing
// abscissae. Exact for quintics on each interval.
class DenseTrajectory {
 public:
  void push(const HermiteNode& node) {
    if (!nodes_.empty() && node.x <= nodes_.back().x) {
      throw SolverFailure("dense trajectory: abscissae must increase");
    }
    nodes_.push_back(node);
  }

  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }
  double x_begin() const { return nodes_.front().x; }
  double x_end() const { return nodes_.back().x; }
  const std::vector<HermiteNode>& nodes() const { return nodes_; }

  ValueAndSlope eval(double x) const {
    if (nodes_.size() < 2) throw SolverFailure("dense trajectory: too few nodes");
    auto it = std::upper_bound(
        nodes_.begin(), nodes_.end(), x,
        [](double v, const HermiteNode& n) { return v < n.x; });
    std::size_t j = static_cast<std::size_t>(it - nodes_.begin());
    j = std::clamp<std::size_t>(j, 1, nodes_.size() - 1);
    const HermiteNode& a = nodes_[j - 1];
    const HermiteNode& b = nodes_[j];
    const double h = b.x - a.x;
    const double s = (x - a.x) / h;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
    const double h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
    const double h2 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
    const double h3 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
    const double h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
    const double h5 = 0.5 * (s3 - 2.0 * s4 + s5);
    const double g0 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
    const double g1 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
    const double g2 = 0.5 * (2.0 * s - 9.0 * s2 + 12.0 * s3 - 5.0 * s4);
    const double g3 = -g0;
    const double g4 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
    const double g5 = 0.5 * (3.0 * s2 - 8.0 * s3 + 5.0 * s4);
    const double value = a.f * h0 + h * a.df * h1 + h * h * a.d2f * h2 +
                         b.f * h3 + h * b.df * h4 + h * h * b.d2f * h5;
    if (std::isfinite(a.d3f) && std::isfinite(b.d3f)) {
      const double slope = a.df * h0 + h * a.d2f * h1 + h * h * a.d3f * h2 +
                           b.df * h3 + h * b.d2f * h4 + h * h * b.d3f * h5;
      return {value, slope};
    }
    const double slope = (a.f * g0 + b.f * g3) / h + a.df * g1 + b.df * g4 +
                         h * (a.d2f * g2 + b.d2f * g5);
    return {value, slope};
  }

 private:
  std::vector<HermiteNode> nodes_;
};

}  // namespace henon::numerics
