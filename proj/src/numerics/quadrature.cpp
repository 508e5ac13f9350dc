#include "henon/numerics/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "henon/error.hpp"

namespace henon::numerics {

GaussRule gauss_legendre(std::size_t n) {
  if (n == 0) throw InvalidArgument("gauss_legendre: n must be positive");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::size_t panels, std::size_t points_per_panel) {
  const GaussRule rule = gauss_legendre(points_per_panel);
  const double h = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t k = 0; k < panels; ++k) {
    const double mid = a + (static_cast<double>(k) + 0.5) * h;
    double s = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      s += rule.weights[j] * f(mid + 0.5 * h * rule.nodes[j]);
    }
    total += 0.5 * h * s;
  }
  return total;
}

LegendreValues legendre(std::size_t kmax, double mu) {
  LegendreValues v;
  v.p.assign(kmax + 1, 0.0);
  v.dp.assign(kmax + 1, 0.0);
  v.d2p.assign(kmax + 1, 0.0);
  v.p[0] = 1.0;
  if (kmax >= 1) {
    v.p[1] = mu;
    v.dp[1] = 1.0;
  }
  for (std::size_t k = 2; k <= kmax; ++k) {
    const double kd = static_cast<double>(k);
    v.p[k] = ((2.0 * kd - 1.0) * mu * v.p[k - 1] - (kd - 1.0) * v.p[k - 2]) / kd;
    // P_k' = P_{k-2}' + (2k - 1) P_{k-1}
    v.dp[k] = v.dp[k - 2] + (2.0 * kd - 1.0) * v.p[k - 1];
  }
  const double s2 = 1.0 - mu * mu;
  for (std::size_t k = 0; k <= kmax; ++k) {
    const double kd = static_cast<double>(k);
    v.d2p[k] = s2 > 0.0 ? (2.0 * mu * v.dp[k] - kd * (kd + 1.0) * v.p[k]) / s2 : 0.0;
  }
  return v;
}

}  // namespace henon::numerics
