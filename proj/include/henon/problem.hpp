#pragma once

// Parameters of -Laplace u = |x|^alpha u^p and the closed-form exponents and
// change of variables shared by the rest of the library.

#include <cstddef>
#include <vector>

#include "henon/profile.hpp"

namespace henon {

struct ProblemParams {
  int N = 3;
  double alpha = 0.0;
  double p = 2.0;
};

// Throws InvalidArgument unless N >= 3, alpha >= 0 and p > 1 (the range used by
// the solution pipelines; alpha = 0 is the unweighted problem).
void validate_pipeline(const ProblemParams& params);

// p_alpha(N) = (N + 2 + 2 alpha) / (N - 2).
double critical_exponent(int N, double alpha);
inline double critical_exponent(const ProblemParams& p) {
  return critical_exponent(p.N, p.alpha);
}

// (N + 2) / (N - 2).
double sobolev_exponent(int N);

// N(alpha) = 2 (N + alpha) / (2 + alpha); the dimension in which the weighted
// radial problem becomes unweighted.
double fractional_dimension(double N, double alpha);
inline double fractional_dimension(const ProblemParams& p) {
  return fractional_dimension(p.N, p.alpha);
}

// beta = (N - 2) p - N - 2 - alpha, the weight exponent after a Kelvin
// transform.
double kelvin_beta(const ProblemParams& params);

// alpha* = p (N - 2) - N - 2, the weight that makes beta vanish.
double alpha_for_fast_decay(int N, double p);

struct SphericalMode {
  std::size_t k;
  double lambda;
  std::size_t multiplicity;
};

// Eigenvalues k (k + N - 2) of the Laplace-Beltrami operator on S^{N-1}.
double sphere_eigenvalue(int N, std::size_t k);

struct SphericalSpectrum {
  int N = 3;
  std::vector<SphericalMode> entries;
};
SphericalSpectrum spherical_spectrum(int N, std::size_t k_max);

// u(r) = (1 + alpha/2)^{2/(p-1)} w(r^{1 + alpha/2}) links a radial solution u of
// the weighted problem in dimension N with a solution w of the unweighted
// problem in dimension N(alpha).
//
// Maps u (dimension N, weight alpha) to w (dimension N(alpha), weight 0),
// resampled on a uniform grid with the input's node count.
RadialProfile to_fractional_dimension(const RadialProfile& u);

// Maps w (dimension N(alpha), weight 0) back to u in dimension N with weight
// alpha.
RadialProfile from_fractional_dimension(const RadialProfile& w, int N, double alpha);

}  // namespace henon
