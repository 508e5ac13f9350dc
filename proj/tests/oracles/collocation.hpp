#pragma once

// Independent check on the radial solver: the weighted problem
// -(v'' + (N-1) v'/r) = r^alpha v^p, v'(0) = 0, v(1) = 0, rewritten in
// rho = sqrt(r) as -(U'' + (2N-3) U'/rho) = 4 rho^{2+2 alpha} U^p and solved by
// Chebyshev collocation on [-1, 1] (even extension, odd node count so rho = 0
// is never a node) with Newton's method. Spectrally accurate when 2 + 2 alpha
// is an even integer.

#include <optional>
#include <vector>

namespace oracle {

struct CollocationSolution {
  std::vector<double> rho, U;  // Chebyshev-Lobatto nodes on [-1, 1]
  int newton_steps = 0;
  double residual = 0.0;
  double value(double r) const;  // v(r) = U(sqrt r), barycentric interpolation
};

std::optional<CollocationSolution> solve_weighted_radial(int N, double alpha, double p,
                                                         int intervals = 61);

}  // namespace oracle
