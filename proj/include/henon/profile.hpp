#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "henon/numerics/ode.hpp"

namespace henon {

using numerics::ValueAndSlope;

// Continuous evaluator for a radial function, u(r) and u'(r).
using RadialFunction = std::function<ValueAndSlope(double)>;

// A radial function sampled on a grid, optionally backed by an exact
// evaluator (the dense output of the solver that produced it). Without one,
// off-grid values come from cubic Hermite interpolation of (values, dvalues).
struct RadialProfile {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> dvalues;
  double dimension = 0.0;     // m, possibly fractional
  double weight_alpha = 0.0;  // exponent of the |x|^alpha weight
  double p = 0.0;
  double central_value = 0.0;
  std::optional<double> first_zero_R0;
  std::shared_ptr<const RadialFunction> exact;

  std::size_t size() const { return grid.size(); }
  ValueAndSlope at(double r) const;
  double value(double r) const { return at(r).value; }
  double slope(double r) const { return at(r).slope; }

  // Same samples, no exact evaluator.
  RadialProfile grid_only() const;
};

// Uniform grid on [a, b] with n nodes.
std::vector<double> uniform_grid(double a, double b, std::size_t n);

// Samples f on the grid and fills values/dvalues; metadata left default.
RadialProfile sample_profile(const RadialFunction& f, std::vector<double> grid);

}  // namespace henon
