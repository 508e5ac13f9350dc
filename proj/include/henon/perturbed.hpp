#pragma once

// Positive solutions on perturbed balls Omega_t in R^3 by the fixed-point
// iteration  phi <- L^{-1} [ L_t(v_p + phi) + H_t(x, phi) ],  where
// L = -Laplace - p r^alpha v_p^{p-1} is inverted mode by mode on axisymmetric
// Legendre expansions and v = v_p + phi solves the pulled-back problem
// -Laplace v - L_t(v) = |x + t psi(x)|^alpha |v|^{p-1} v  on B.

#include <cstddef>
#include <memory>
#include <vector>

#include "henon/domain_map.hpp"
#include "henon/numerics/banded.hpp"
#include "henon/problem.hpp"
#include "henon/profile.hpp"
#include "henon/radial.hpp"

namespace henon {

// Cell-centred radial nodes r_i = (i - 1/2) h, h = 1/n, times Gauss-Legendre
// nodes in mu = cos(theta), with Legendre tables P_k(mu_j).
struct AxisymmetricGrid {
  std::size_t kmax = 0;
  double h = 0.0;
  std::vector<double> r;
  std::vector<double> mu, weights;
  std::vector<std::vector<double>> P, dP, d2P;  // [j][k]

  static AxisymmetricGrid make(std::size_t kmax, std::size_t rnodes,
                               std::size_t mu_nodes = 0);  // 0: kmax + 8
  std::size_t nr() const { return r.size(); }
  std::size_t nmu() const { return mu.size(); }
  // Cartesian point (r sin(theta), 0, r mu) of node (i, j)
  Vec3 point(std::size_t i, std::size_t j) const;
};

// Axisymmetric function sum_k a_k(r) P_k(mu) on the radial nodes.
struct HarmonicField {
  std::vector<std::vector<double>> modes;  // [k][i]

  static HarmonicField zeros(const AxisymmetricGrid& grid);
  std::size_t kmax() const { return modes.empty() ? 0 : modes.size() - 1; }
  // values at the grid nodes, index i * nmu + j
  std::vector<double> synthesize(const AxisymmetricGrid& grid) const;
  double sup_norm(const AxisymmetricGrid& grid) const;
};

// Projection (2k+1)/2 int f P_k dmu by the grid's quadrature.
HarmonicField project(const std::vector<double>& nodal, const AxisymmetricGrid& grid);

// Mode k coefficient with first and second radial derivatives at the nodes,
// by central differences of order 6 or 8 (parity reflection through the
// origin, Dirichlet extrapolation through r = 1).
struct ModeDerivatives {
  std::vector<double> a, da, d2a;
};
ModeDerivatives mode_derivatives(const std::vector<double>& a, std::size_t k, double h,
                                 int order = 6);

// L_k a = -a'' - 2a'/r + lambda_k a / r^2 - p r^alpha v_p^{p-1} a with a(1) = 0.
// Two discretizations: the second-order conservative one (tridiagonal), and the
// sixth-order central one that solve() inverts by banded LU.
class ModeSolver {
 public:
  ModeSolver(const AxisymmetricGrid& grid, const RadialProfile& vp,
             double potential_scale = 1.0);

  std::size_t kmax() const { return ops_.size() - 1; }
  // second-order L_k a
  std::vector<double> apply(std::size_t k, const std::vector<double>& a) const;
  // sixth-order L_k a
  std::vector<double> apply_high(std::size_t k, const std::vector<double>& a) const;
  std::vector<double> solve_second_order(std::size_t k, const std::vector<double>& f) const;
  std::vector<double> solve(std::size_t k, const std::vector<double>& f) const;
  HarmonicField solve(const HarmonicField& rhs, std::size_t workers = 1) const;
  // inf-norm of the inverse of the second-order L_k
  double inverse_norm(std::size_t k) const;
  const std::vector<double>& potential() const { return potential_; }

 private:
  std::vector<numerics::BandedMatrix> ops_, factors_, high_;
  std::vector<double> potential_, r_;
  double h_ = 0.0;
};

struct PerturbedOptions {
  std::size_t kmax = 32;
  std::size_t rnodes = 1024;
  std::size_t maxiter = 200;
  double tol = 1e-10;
  double trust = 0.25;          // ||phi / v_p||_sup must stay below this
  double norm_limit = 1e3;      // mode inverse norm treated as degenerate
  double certificate_threshold = 1e-6;
  bool check_certificate = true;
  std::size_t workers = 1;
  RadialOptions radial;
};

struct ContractionReport {
  std::vector<double> increments;  // ||phi_{n+1} - phi_n||_sup
  double kappa = 0.0;              // largest ratio of successive increments
  std::size_t iterations = 0;
  double residual_sup = 0.0;
  double positivity_margin = 0.0;  // min of v_p + phi on the grid
  double phi_sup = 0.0;
  std::vector<double> mode_solve_norms;
  bool converged = false;
  bool positive = false;
};

// The map T and its ingredients for one problem, map and grid.
class ContractionMap {
 public:
  ContractionMap(const ProblemParams& params, const DomainMapSpec& spec,
                 const PerturbedOptions& opts = {});
  ContractionMap(const ProblemParams& params, const DomainMapSpec& spec,
                 const RadialProfile& vp, const PerturbedOptions& opts = {});

  const AxisymmetricGrid& grid() const { return grid_; }
  const RadialProfile& vp() const { return vp_; }
  const ModeSolver& solver() const { return *solver_; }
  const InverseMapField& field() const { return field_; }
  const ProblemParams& params() const { return params_; }
  const DomainMapSpec& spec() const { return spec_; }

  // Nodal values of L_t(v_p + phi).
  std::vector<double> lt_nodal(const HarmonicField& phi) const;
  // Nodal values of H_t(x, phi); throws NoConvergence when ||phi/v_p|| >= trust.
  std::vector<double> ht_nodal(const HarmonicField& phi) const;
  // T(phi)
  HarmonicField apply(const HarmonicField& phi) const;
  // pulled-back equation residual at every node, index i * nmu + j
  std::vector<double> residual_nodal(const HarmonicField& phi) const;
  // sup of the pulled-back equation residual over nodes with r in [r_lo, r_hi]
  double residual(const HarmonicField& phi, double r_lo = 0.01, double r_hi = 0.99) const;
  // min over the nodes of v_p + phi
  double positivity_margin(const HarmonicField& phi) const;

 private:
  void setup(const PerturbedOptions& opts);

  // v_p + phi with its Cartesian gradient and Hessian at every node
  struct NodalJet {
    std::vector<double> value, phi;
    std::vector<Vec3> grad;
    std::vector<Mat3> hess;
  };
  NodalJet jet(const HarmonicField& phi) const;

  ProblemParams params_;
  DomainMapSpec spec_;
  PerturbedOptions opts_;
  AxisymmetricGrid grid_;
  RadialProfile vp_;
  std::vector<double> vp_value_, vp_d1_, vp_d2_;  // per radial node
  std::shared_ptr<ModeSolver> solver_;
  InverseMapField field_;
  std::vector<LtCoefficients> lt_;
  std::vector<double> weight_;  // |x + t psi(x)|^alpha per node
};

struct PerturbedSolution {
  HarmonicField phi;
  ContractionReport report;
  std::shared_ptr<const ContractionMap> map;
};

// Checks nondegeneracy (exit 2 on failure), iterates T from phi = 0 and
// reports. Throws DegenerateExponent, NoConvergence or InvalidArgument.
PerturbedSolution contraction_solve(const ProblemParams& params, const DomainMapSpec& spec,
                                    const PerturbedOptions& opts = {});

// Residual of the pulled-back equation for a converged solution.
double residual_on_ball(const PerturbedSolution& sol, double r_lo = 0.01, double r_hi = 0.99);

}  // namespace henon
