#pragma once

#include <cstddef>
#include <vector>

namespace henon::numerics {

// Symmetric-definite tridiagonal pencil A x = lambda B x with B diagonal and
// positive. Eigenvalues are isolated by Sturm counts of A - sigma B (Sylvester
// inertia of its LDL^T factorization) and polished by inverse iteration.
class TridiagonalPencil {
 public:
  TridiagonalPencil(std::vector<double> diag, std::vector<double> off,
                    std::vector<double> mass);

  std::size_t size() const { return diag_.size(); }

  // Number of eigenvalues strictly below sigma.
  std::size_t count_below(double sigma) const;

  // Gershgorin interval of B^{-1/2} A B^{-1/2}.
  double lower_bound() const;
  double upper_bound() const;

  // k-th smallest eigenvalue (0-based) by bisection on count_below.
  double eigenvalue(std::size_t k, double abs_tol = 1e-13) const;

  struct EigenPair {
    double value;
    std::vector<double> vector;  // B-normalized
    std::size_t iterations;
  };
  // Inverse iteration at a shift close to an isolated eigenvalue; the value
  // returned is the Rayleigh quotient of the converged vector.
  EigenPair inverse_iteration(double shift, std::size_t max_iter = 20,
                              double tol = 1e-14) const;

 private:
  std::vector<double> diag_, off_, mass_;
};

}  // namespace henon::numerics
