#include "henon/numerics/banded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "henon/error.hpp"

namespace henon::numerics {

BandedMatrix::BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), width_(2 * kl + ku + 1), data_(n * width_, 0.0) {
  if (n == 0) throw InvalidArgument("banded matrix: empty");
}

std::size_t BandedMatrix::index(std::size_t i, std::size_t j) const {
  // column offset j - i is in [-kl, ku + kl]
  return i * width_ + (j + kl_ - i);
}

double& BandedMatrix::at(std::size_t i, std::size_t j) {
  if (j + kl_ < i || j > i + ku_ + kl_ || i >= n_ || j >= n_) {
    throw InvalidArgument("banded matrix: entry (" + std::to_string(i) + ", " +
                          std::to_string(j) + ") outside the band");
  }
  return data_[index(i, j)];
}

double BandedMatrix::at(std::size_t i, std::size_t j) const {
  if (j + kl_ < i || j > i + ku_ + kl_ || i >= n_ || j >= n_) return 0.0;
  return data_[index(i, j)];
}

void BandedMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j0 = i > kl_ ? i - kl_ : 0;
    const std::size_t j1 = std::min(n_ - 1, i + ku_);
    double s = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) s += data_[index(i, j)] * x[j];
    y[i] = s;
  }
}

void BandedMatrix::factor() {
  pivots_.assign(n_, 0);
  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t last_row = std::min(n_ - 1, k + kl_);
    const std::size_t last_col = std::min(n_ - 1, k + ku_ + kl_);
    std::size_t piv = k;
    double best = std::abs(data_[index(k, k)]);
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      const double v = std::abs(data_[index(i, k)]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    pivots_[k] = piv;
    if (best == 0.0) {
      throw DegenerateExponent("banded matrix: exactly singular at column " +
                               std::to_string(k));
    }
    if (piv != k) {
      for (std::size_t j = k; j <= last_col; ++j) {
        std::swap(data_[index(k, j)], data_[index(piv, j)]);
      }
    }
    const double inv = 1.0 / data_[index(k, k)];
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      const double l = data_[index(i, k)] * inv;
      data_[index(i, k)] = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j <= last_col; ++j) {
        data_[index(i, j)] -= l * data_[index(k, j)];
      }
    }
  }
  factored_ = true;
}

void BandedMatrix::solve_in_place(std::span<double> b) const {
  if (!factored_) throw SolverFailure("banded matrix: solve before factor");
  for (std::size_t k = 0; k < n_; ++k) {
    if (pivots_[k] != k) std::swap(b[k], b[pivots_[k]]);
    const std::size_t last_row = std::min(n_ - 1, k + kl_);
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      b[i] -= data_[index(i, k)] * b[k];
    }
  }
  for (std::size_t kk = n_; kk-- > 0;) {
    const std::size_t last_col = std::min(n_ - 1, kk + ku_ + kl_);
    double s = b[kk];
    for (std::size_t j = kk + 1; j <= last_col; ++j) s -= data_[index(kk, j)] * b[j];
    b[kk] = s / data_[index(kk, kk)];
  }
}

std::vector<double> BandedMatrix::solve(std::span<const double> rhs) const {
  std::vector<double> x(rhs.begin(), rhs.end());
  solve_in_place(x);
  return x;
}

double BandedMatrix::pivot_ratio() const {
  if (!factored_) return 0.0;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t k = 0; k < n_; ++k) {
    const double v = std::abs(data_[index(k, k)]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi > 0.0 ? lo / hi : 0.0;
}

std::vector<double> solve_symmetric_tridiagonal(std::span<const double> diag,
                                                std::span<const double> off,
                                                std::span<const double> rhs) {
  const std::size_t n = diag.size();
  std::vector<double> d(n), l(n > 0 ? n - 1 : 0), x(rhs.begin(), rhs.end());
  const double tiny = std::numeric_limits<double>::epsilon() * 1e-3;
  d[0] = diag[0];
  if (std::abs(d[0]) < tiny) d[0] = tiny;
  for (std::size_t i = 1; i < n; ++i) {
    l[i - 1] = off[i - 1] / d[i - 1];
    d[i] = diag[i] - l[i - 1] * off[i - 1];
    if (std::abs(d[i]) < tiny * (std::abs(diag[i]) + 1.0)) {
      d[i] = tiny * (std::abs(diag[i]) + 1.0);
    }
  }
  for (std::size_t i = 1; i < n; ++i) x[i] -= l[i - 1] * x[i - 1];
  for (std::size_t i = 0; i < n; ++i) x[i] /= d[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= l[i] * x[i + 1];
  return x;
}

}  // namespace henon::numerics
