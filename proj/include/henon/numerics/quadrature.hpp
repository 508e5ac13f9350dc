#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace henon::numerics {

struct GaussRule {
  std::vector<double> nodes;    // ascending, in (-1, 1)
  std::vector<double> weights;
};

GaussRule gauss_legendre(std::size_t n);

// Composite Gauss-Legendre on [a, b] with equal panels.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::size_t panels, std::size_t points_per_panel = 8);

// Legendre polynomials P_0..P_kmax at mu with first and second derivatives.
// The second derivative uses the Legendre ODE and needs |mu| < 1.
struct LegendreValues {
  std::vector<double> p, dp, d2p;
};
LegendreValues legendre(std::size_t kmax, double mu);

}  // namespace henon::numerics
