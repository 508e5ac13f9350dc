#pragma once

// Linearization of -Laplace u = r^alpha u^p at the radial solution v_p:
// harmonic-mode shooting, the first eigenvalue nu(p) of the radial operator
// r^2 (-Laplace - p r^alpha v_p^{p-1}) in L^2(B, |x|^{-2} dx), and the exponents
// p_k at which nu(p) = -lambda_k makes the linearization degenerate.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "henon/problem.hpp"
#include "henon/profile.hpp"
#include "henon/radial.hpp"

namespace henon {

struct ModeShootOptions {
  double tol = 1e-11;
  double launch = 1e-6;          // start at r = launch on the r^k branch
  double potential_scale = 1.0;  // 0 turns the potential off (Euler equation)
};

struct ModeShot {
  std::size_t k = 0;
  double lambda_k = 0.0;
  double boundary_value = 0.0;  // a_k(1) / max |a_k|
  double raw_boundary = 0.0;    // a_k(1) with a_k(r) ~ r^k at the origin
  double max_abs = 0.0;
  RadialProfile profile;        // a_k on the grid of vp
};

// Shoots a'' + (m-1) a'/r + p r^alpha v^{p-1} a - lambda_k a / r^2 = 0 from the
// regular branch a ~ r^k, with m = vp.dimension and lambda_k = k (k + m - 2).
// Internally works with b = a / r^k so large k does not underflow.
ModeShot mode_shoot(const RadialProfile& vp, std::size_t k,
                    const ModeShootOptions& opts = {});

struct EigenOptions {
  double t_max = 40.0;        // truncation: r >= exp(-t_max)
  std::size_t nodes = 20000;  // interior unknowns of the coarse grid
  bool extrapolate = true;    // Richardson on nodes and 2 nodes + 1
  double potential_scale = 1.0;
};

// nu(p) via t = -log r, psi = r^{-(m-2)/2} chi: the smallest eigenvalue of
// -chi'' + [((m-2)/2)^2 - p e^{-(2+alpha)t} v(e^{-t})^{p-1}] chi on
// [0, t_max] with Dirichlet ends, by second-order differences.
double nu_schrodinger(const RadialProfile& vp, const EigenOptions& opts = {});

// Independent discretization in r of
// -(r^{m-1} psi')' - p r^{m-1+alpha} v^{p-1} psi = nu r^{m-3} psi
// by finite volumes on a geometric mesh of [exp(-t_max), 1], Dirichlet at both
// ends. Returns the `count` smallest eigenvalues.
std::vector<double> nu_direct_eigenvalues(const RadialProfile& vp,
                                          std::size_t count,
                                          const EigenOptions& opts = {});
inline double nu_direct(const RadialProfile& vp, const EigenOptions& opts = {}) {
  return nu_direct_eigenvalues(vp, 1, opts).front();
}

// Rayleigh quotient of the radial operator at psi = v_p.
double rayleigh_quotient_vp(const RadialProfile& vp, std::size_t panels = 4096);

// max over [0, 1] of r^{2+alpha} v^{p-1}, sampled on the profile grid and
// refined around the largest sample.
double potential_peak(const RadialProfile& vp);

struct SpectralSample {
  double p = 0.0;
  double nu = 0.0;
  double nu_direct = 0.0;
  double second = 0.0;  // second direct eigenvalue
  double gap = 0.0;     // |nu - nu_direct|
  bool ok = false;
  std::string error;
};

struct SpectralCurve {
  int N = 3;
  double alpha = 0.0;
  std::vector<SpectralSample> samples;
};

struct SweepOptions {
  EigenOptions eigen;
  RadialOptions radial;
  std::size_t workers = 1;
};

// Uniform grid of `count` exponents on [lo, hi].
std::vector<double> exponent_grid(double lo, double hi, std::size_t count);

// Default sweep range [(N+2)/(N-2), p_alpha(N) - margin].
std::vector<double> default_sweep(int N, double alpha, std::size_t count = 400,
                                  double margin = 1e-3);

// nu(p) and the direct check for one exponent; errors are caught and recorded.
SpectralSample spectral_sample(int N, double alpha, double p,
                               const SweepOptions& opts = {});

// Samples are returned in the order of `ps` regardless of the worker count.
SpectralCurve sweep_nu(int N, double alpha, const std::vector<double>& ps,
                       const SweepOptions& opts = {});

struct DegeneracyEntry {
  std::size_t k = 0;
  double lambda_k = 0.0;
  double p_k = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double mode_shot_residual = 0.0;  // |a_k(1)| / max |a_k| at p_k
};

struct DegeneracyTable {
  int N = 3;
  double alpha = 0.0;
  std::vector<DegeneracyEntry> entries;  // increasing p_k
};

struct RootOptions {
  double p_tol = 1e-8;
  std::size_t max_refine = 4;  // bracket refinements for ambiguous cells
};

// Roots of nu(p) + lambda_k for 1 <= k <= k_max bracketed by sign changes in
// the curve, located by bisection on p.
DegeneracyTable find_pk(const SpectralCurve& curve, std::size_t k_max,
                        const SweepOptions& opts = {},
                        const RootOptions& roots = {});

struct NondegeneracyReport {
  ProblemParams params;
  std::size_t K = 0;            // modes 0..K were shot
  double potential_max = 0.0;   // p * max r^{2+alpha} v^{p-1}
  std::vector<double> boundary_values;  // |a_k(1)| / max |a_k|, k = 0..K
  double min_abs = 0.0;
  std::size_t witness_k = 0;    // mode attaining min_abs
  bool degenerate = false;
  double threshold = 1e-6;
};

// Shoots every mode that can vanish; degenerate iff some |a_k(1)| <= threshold.
NondegeneracyReport nondegeneracy_certificate(const ProblemParams& params,
                                              const RadialProfile& vp,
                                              double threshold = 1e-6,
                                              const ModeShootOptions& opts = {});
NondegeneracyReport nondegeneracy_certificate(const ProblemParams& params,
                                              double threshold = 1e-6,
                                              const RadialOptions& radial = {});

// The mode k whose root p_k lies within delta of p, if any: nu(p') + lambda_k
// changes sign on [p - delta, p + delta] (clipped to the subcritical range) or
// the mode-k shot vanishes at p.
std::optional<std::size_t> forbidden_mode_near(const ProblemParams& params,
                                               double delta = 1e-3,
                                               const SweepOptions& opts = {});

}  // namespace henon
