#include "henon/numerics/tridiagonal_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "henon/error.hpp"
#include "henon/numerics/banded.hpp"

namespace henon::numerics {

TridiagonalPencil::TridiagonalPencil(std::vector<double> diag,
                                     std::vector<double> off,
                                     std::vector<double> mass)
    : diag_(std::move(diag)), off_(std::move(off)), mass_(std::move(mass)) {
  if (diag_.empty() || off_.size() + 1 != diag_.size() ||
      mass_.size() != diag_.size()) {
    throw InvalidArgument("tridiagonal pencil: inconsistent sizes");
  }
  for (double m : mass_) {
    if (!(m > 0.0)) throw InvalidArgument("tridiagonal pencil: mass must be positive");
  }
}

std::size_t TridiagonalPencil::count_below(double sigma) const {
  const std::size_t n = diag_.size();
  std::size_t count = 0;
  const double tiny = std::numeric_limits<double>::min() * 1e4;
  double q = diag_[0] - sigma * mass_[0];
  if (q == 0.0) q = -tiny;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    q = (diag_[i] - sigma * mass_[i]) - off_[i - 1] * off_[i - 1] / q;
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

double TridiagonalPencil::lower_bound() const {
  const std::size_t n = diag_.size();
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(off_[i - 1]) / std::sqrt(mass_[i] * mass_[i - 1]);
    if (i + 1 < n) radius += std::abs(off_[i]) / std::sqrt(mass_[i] * mass_[i + 1]);
    lo = std::min(lo, diag_[i] / mass_[i] - radius);
  }
  return lo;
}

double TridiagonalPencil::upper_bound() const {
  const std::size_t n = diag_.size();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(off_[i - 1]) / std::sqrt(mass_[i] * mass_[i - 1]);
    if (i + 1 < n) radius += std::abs(off_[i]) / std::sqrt(mass_[i] * mass_[i + 1]);
    hi = std::max(hi, diag_[i] / mass_[i] + radius);
  }
  return hi;
}

double TridiagonalPencil::eigenvalue(std::size_t k, double abs_tol) const {
  if (k >= diag_.size()) throw InvalidArgument("tridiagonal pencil: index out of range");
  double lo = lower_bound();
  double hi = upper_bound();
  // The Gershgorin interval is very wide for stiff grids; the first few
  // eigenvalues sit near the bottom, so shrink hi geometrically first.
  double span = std::max(1.0, std::abs(lo));
  double probe = lo + span;
  while (probe < hi && count_below(probe) <= k) {
    lo = probe;
    span *= 2.0;
    probe = lo + span;
  }
  hi = std::min(hi, probe);
  for (int it = 0; it < 200 && hi - lo > abs_tol * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

TridiagonalPencil::EigenPair TridiagonalPencil::inverse_iteration(
    double shift, std::size_t max_iter, double tol) const {
  const std::size_t n = diag_.size();
  std::vector<double> shifted(n);
  for (std::size_t i = 0; i < n; ++i) shifted[i] = diag_[i] - shift * mass_[i];
  std::vector<double> x(n, 1.0), rhs(n);
  auto b_norm = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += mass_[i] * v[i] * v[i];
    return std::sqrt(s);
  };
  double nrm = b_norm(x);
  for (double& v : x) v /= nrm;
  double rq = shift;
  std::size_t it = 0;
  for (; it < max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) rhs[i] = mass_[i] * x[i];
    std::vector<double> y = solve_symmetric_tridiagonal(shifted, off_, rhs);
    nrm = b_norm(y);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) {
      throw SolverFailure("inverse iteration: breakdown");
    }
    // keep a consistent sign: positive at the largest entry
    const auto imax = static_cast<std::size_t>(
        std::max_element(y.begin(), y.end(),
                         [](double a, double b) { return std::abs(a) < std::abs(b); }) -
        y.begin());
    const double sgn = y[imax] < 0.0 ? -1.0 : 1.0;
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = sgn * y[i] / nrm;
      change = std::max(change, std::abs(v - x[i]));
      x[i] = v;
    }
    if (change < tol * std::sqrt(static_cast<double>(n))) {
      ++it;
      break;
    }
  }
  // Rayleigh quotient x^T A x with x^T B x = 1
  double num = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += diag_[i] * x[i] * x[i];
    if (i + 1 < n) num += 2.0 * off_[i] * x[i] * x[i + 1];
  }
  rq = num;
  return {rq, std::move(x), it};
}

}  // namespace henon::numerics
