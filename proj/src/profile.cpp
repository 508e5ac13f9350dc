#include "henon/profile.hpp"

#include <algorithm>

#include "henon/error.hpp"

namespace henon {

ValueAndSlope RadialProfile::at(double r) const {
  if (exact) return (*exact)(r);
  if (grid.size() < 2) throw InvalidArgument("radial profile: fewer than two nodes");
  auto it = std::upper_bound(grid.begin(), grid.end(), r);
  std::size_t j = static_cast<std::size_t>(it - grid.begin());
  j = std::clamp<std::size_t>(j, 1, grid.size() - 1);
  const double h = grid[j] - grid[j - 1];
  const double s = (r - grid[j - 1]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  const double value = h00 * values[j - 1] + h * h10 * dvalues[j - 1] +
                       h01 * values[j] + h * h11 * dvalues[j];
  const double g00 = 6.0 * s2 - 6.0 * s;
  const double g10 = 3.0 * s2 - 4.0 * s + 1.0;
  const double g11 = 3.0 * s2 - 2.0 * s;
  const double slope = (g00 * values[j - 1] - g00 * values[j]) / h +
                       g10 * dvalues[j - 1] + g11 * dvalues[j];
  return {value, slope};
}

RadialProfile RadialProfile::grid_only() const {
  RadialProfile copy = *this;
  copy.exact.reset();
  return copy;
}

std::vector<double> uniform_grid(double a, double b, std::size_t n) {
  if (n < 2) throw InvalidArgument("uniform grid: need at least two nodes");
  std::vector<double> g(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = a + h * static_cast<double>(i);
  g.back() = b;
  return g;
}

RadialProfile sample_profile(const RadialFunction& f, std::vector<double> grid) {
  RadialProfile out;
  out.values.resize(grid.size());
  out.dvalues.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const ValueAndSlope v = f(grid[i]);
    out.values[i] = v.value;
    out.dvalues[i] = v.slope;
  }
  out.grid = std::move(grid);
  return out;
}

}  // namespace henon
