#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace henon::numerics {

// General banded matrix with kl sub- and ku super-diagonals, factored in place
// by Gaussian elimination with partial pivoting (fill-in widens the upper band
// to ku + kl, as in LAPACK's gbtrf).
class BandedMatrix {
 public:
  BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku);

  std::size_t size() const { return n_; }
  std::size_t lower() const { return kl_; }
  std::size_t upper() const { return ku_; }

  // Entry (i, j); |j - i| must lie within the declared band.
  double& at(std::size_t i, std::size_t j);
  double at(std::size_t i, std::size_t j) const;

  // y = A x, valid before factor() only.
  void multiply(std::span<const double> x, std::span<double> y) const;

  void factor();
  bool factored() const { return factored_; }
  void solve_in_place(std::span<double> rhs) const;
  std::vector<double> solve(std::span<const double> rhs) const;

  // Smallest |pivot| relative to the largest; a cheap singularity indicator.
  double pivot_ratio() const;

 private:
  std::size_t index(std::size_t i, std::size_t j) const;

  std::size_t n_, kl_, ku_, width_;
  std::vector<double> data_;
  std::vector<std::size_t> pivots_;
  bool factored_ = false;
};

// Symmetric tridiagonal solve (T - shift) x = rhs with diagonal shift weights,
// by LDL^T without pivoting. Zero pivots are nudged, which is what inverse
// iteration wants.
std::vector<double> solve_symmetric_tridiagonal(std::span<const double> diag,
                                                std::span<const double> off,
                                                std::span<const double> rhs);

}  // namespace henon::numerics
