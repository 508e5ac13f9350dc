#include "henon/perturbed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "henon/error.hpp"
#include "henon/numerics/finite_difference.hpp"
#include "henon/numerics/parallel.hpp"
#include "henon/numerics/quadrature.hpp"
#include "henon/spectrum.hpp"

namespace henon {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

// Lagrange weights at x for the given abscissae.
std::vector<double> lagrange_weights(const std::vector<double>& nodes, double x) {
  std::vector<double> w(nodes.size(), 1.0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (j != i) w[i] *= (x - nodes[j]) / (nodes[i] - nodes[j]);
    }
  }
  return w;
}

// Cartesian gradient and Hessian at (r sin(theta), 0, r mu) of an
// axisymmetric V(r, mu).
void cartesian_jet(double r, double mu, double vr, double vrr, double vm, double vrm,
                   double vmm, Vec3& grad, Mat3& hess) {
  const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
  const double r_rho = s, r_z = mu;
  const double m_rho = -mu * s / r, m_z = s * s / r;
  const double r_rhorho = mu * mu / r, r_rhoz = -s * mu / r, r_zz = s * s / r;
  const double m_rhorho = (-mu + 3.0 * mu * s * s) / (r * r);
  const double m_rhoz = (-s + 3.0 * mu * mu * s) / (r * r);
  const double m_zz = (-3.0 * mu + 3.0 * mu * mu * mu) / (r * r);

  const double v_rho = vr * r_rho + vm * m_rho;
  const double v_z = vr * r_z + vm * m_z;
  const double v_rhorho = vrr * r_rho * r_rho + 2.0 * vrm * r_rho * m_rho +
                          vmm * m_rho * m_rho + vr * r_rhorho + vm * m_rhorho;
  const double v_rhoz = vrr * r_rho * r_z + vrm * (r_rho * m_z + r_z * m_rho) +
                        vmm * m_rho * m_z + vr * r_rhoz + vm * m_rhoz;
  const double v_zz = vrr * r_z * r_z + 2.0 * vrm * r_z * m_z + vmm * m_z * m_z +
                      vr * r_zz + vm * m_zz;
  grad = {v_rho, 0.0, v_z};
  hess = Mat3{};
  hess[0][0] = v_rhorho;
  hess[0][2] = hess[2][0] = v_rhoz;
  hess[2][2] = v_zz;
  hess[1][1] = v_rho / (r * s);
}

double signed_pow(double v, double p) { return std::copysign(std::pow(std::abs(v), p), v); }

}  // namespace

AxisymmetricGrid AxisymmetricGrid::make(std::size_t kmax, std::size_t rnodes,
                                        std::size_t mu_nodes) {
  if (rnodes < 16) throw InvalidArgument("radial node count must be at least 16");
  if (kmax > 200) throw InvalidArgument("kmax must not exceed 200");
  if (mu_nodes == 0) mu_nodes = kmax + 8;
  if (mu_nodes < kmax + 1) throw InvalidArgument("need at least kmax + 1 angular nodes");
  AxisymmetricGrid g;
  g.kmax = kmax;
  g.h = 1.0 / static_cast<double>(rnodes);
  g.r.resize(rnodes);
  for (std::size_t i = 0; i < rnodes; ++i) g.r[i] = (static_cast<double>(i) + 0.5) * g.h;
  const auto rule = numerics::gauss_legendre(mu_nodes);
  g.mu = rule.nodes;
  g.weights = rule.weights;
  for (double m : g.mu) {
    const auto lv = numerics::legendre(kmax, m);
    g.P.push_back(lv.p);
    g.dP.push_back(lv.dp);
    g.d2P.push_back(lv.d2p);
  }
  return g;
}

Vec3 AxisymmetricGrid::point(std::size_t i, std::size_t j) const {
  const double s = std::sqrt(std::max(0.0, 1.0 - mu[j] * mu[j]));
  return {r[i] * s, 0.0, r[i] * mu[j]};
}

HarmonicField HarmonicField::zeros(const AxisymmetricGrid& grid) {
  HarmonicField f;
  f.modes.assign(grid.kmax + 1, std::vector<double>(grid.nr(), 0.0));
  return f;
}

std::vector<double> HarmonicField::synthesize(const AxisymmetricGrid& grid) const {
  const std::size_t nr = grid.nr(), nm = grid.nmu();
  std::vector<double> out(nr * nm, 0.0);
  const std::size_t K = std::min(modes.size(), grid.kmax + 1);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nm; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < K; ++k) s += modes[k][i] * grid.P[j][k];
      out[i * nm + j] = s;
    }
  }
  return out;
}

double HarmonicField::sup_norm(const AxisymmetricGrid& grid) const {
  double sup = 0.0;
  for (double v : synthesize(grid)) sup = std::max(sup, std::abs(v));
  return sup;
}

HarmonicField project(const std::vector<double>& nodal, const AxisymmetricGrid& grid) {
  const std::size_t nr = grid.nr(), nm = grid.nmu();
  if (nodal.size() != nr * nm) throw InvalidArgument("project: nodal size mismatch");
  HarmonicField f = HarmonicField::zeros(grid);
  for (std::size_t k = 0; k <= grid.kmax; ++k) {
    const double c = 0.5 * (2.0 * static_cast<double>(k) + 1.0);
    for (std::size_t i = 0; i < nr; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < nm; ++j) s += grid.weights[j] * nodal[i * nm + j] * grid.P[j][k];
      f.modes[k][i] = c * s;
    }
  }
  return f;
}

namespace {

// Ghost values past r = 1 for a g-point-wide stencil: weights on the last
// 2g - 1 nodes of the polynomial through them and a(1) = 0, evaluated at
// r = 1 + (j + 1/2) h.
const std::vector<std::vector<double>>& top_ghost_weights(std::size_t g) {
  static const auto make = [](std::size_t w) {
    std::vector<double> xs;
    for (std::size_t j = 0; j + 1 < 2 * w; ++j) {
      xs.push_back(-static_cast<double>(2 * w - 2 - j) - 0.5);
    }
    xs.push_back(0.0);
    std::vector<std::vector<double>> out;
    for (std::size_t j = 0; j < w; ++j) {
      auto lw = lagrange_weights(xs, static_cast<double>(j) + 0.5);
      lw.pop_back();  // the boundary node carries zero
      out.push_back(lw);
    }
    return out;
  };
  static const auto w3 = make(3), w4 = make(4);
  return g == 3 ? w3 : w4;
}

}  // namespace

ModeDerivatives mode_derivatives(const std::vector<double>& a, std::size_t k, double h,
                                 int order) {
  if (order != 6 && order != 8) throw InvalidArgument("mode_derivatives: order must be 6 or 8");
  const std::size_t g = static_cast<std::size_t>(order / 2);
  const std::size_t n = a.size();
  if (n < 4 * g) throw InvalidArgument("mode_derivatives: too few nodes");
  const double parity = (k % 2 == 0) ? 1.0 : -1.0;
  std::vector<double> ext(n + 2 * g);
  for (std::size_t i = 0; i < n; ++i) ext[i + g] = a[i];
  for (std::size_t j = 0; j < g; ++j) ext[g - 1 - j] = parity * a[j];
  const auto& w = top_ghost_weights(g);
  const std::size_t used = 2 * g - 1;
  for (std::size_t j = 0; j < g; ++j) {
    double s = 0.0;
    for (std::size_t q = 0; q < used; ++q) s += w[j][q] * a[n - used + q];
    ext[n + g + j] = s;
  }
  ModeDerivatives d;
  d.a = a;
  d.da.resize(n);
  d.d2a.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i + g;
    if (order == 6) {
      d.da[i] = numerics::central_d1(ext, c, h);
      d.d2a[i] = numerics::central_d2(ext, c, h);
    } else {
      d.da[i] = numerics::central_d1_8(ext, c, h);
      d.d2a[i] = numerics::central_d2_8(ext, c, h);
    }
  }
  return d;
}

ModeSolver::ModeSolver(const AxisymmetricGrid& grid, const RadialProfile& vp,
                       double potential_scale) {
  const std::size_t n = grid.nr();
  const double h = grid.h;
  h_ = h;
  r_ = grid.r;
  potential_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid.r[i];
    potential_[i] = potential_scale * vp.p * std::pow(r, vp.weight_alpha) *
                    std::pow(std::abs(vp.value(r)), vp.p - 1.0);
  }
  for (std::size_t k = 0; k <= grid.kmax; ++k) {
    const double lambda = static_cast<double>(k * (k + 1));
    numerics::BandedMatrix m(n, 2, 1);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = grid.r[i];
      const double lo = r - 0.5 * h, hi = r + 0.5 * h;
      const double c = 1.0 / (r * r * h * h);
      const double w_lo = lo * lo * c, w_hi = hi * hi * c;
      m.at(i, i) = w_lo + w_hi + lambda / (r * r) - potential_[i];
      if (i > 0) m.at(i, i - 1) = -w_lo;
      if (i + 1 < n) {
        m.at(i, i + 1) = -w_hi;
      } else {
        // ghost a_n = a_{n-2}/3 - 2 a_{n-1}: quadratic through a(1) = 0
        m.at(i, i) += 2.0 * w_hi;
        m.at(i, i - 1) -= w_hi / 3.0;
      }
    }
    ops_.push_back(m);
    m.factor();
    factors_.push_back(std::move(m));

    // sixth-order operator, ghosts folded into the band
    static constexpr double c1[7] = {-1.0 / 60, 9.0 / 60, -45.0 / 60, 0.0,
                                     45.0 / 60, -9.0 / 60, 1.0 / 60};
    static constexpr double c2[7] = {2.0 / 180, -27.0 / 180, 270.0 / 180, -490.0 / 180,
                                     270.0 / 180, -27.0 / 180, 2.0 / 180};
    const double parity = (k % 2 == 0) ? 1.0 : -1.0;
    const auto& gw = top_ghost_weights(3);
    numerics::BandedMatrix hm(n, 4, 3);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = grid.r[i];
      hm.at(i, i) += lambda / (r * r) - potential_[i];
      for (int o = -3; o <= 3; ++o) {
        const double c = -c2[o + 3] / (h * h) - 2.0 / r * c1[o + 3] / h;
        const long e = static_cast<long>(i) + o;
        if (e < 0) {
          hm.at(i, static_cast<std::size_t>(-e - 1)) += parity * c;
        } else if (e >= static_cast<long>(n)) {
          const auto& w = gw[static_cast<std::size_t>(e) - n];
          for (std::size_t q = 0; q < w.size(); ++q) hm.at(i, n - w.size() + q) += c * w[q];
        } else {
          hm.at(i, static_cast<std::size_t>(e)) += c;
        }
      }
    }
    hm.factor();
    high_.push_back(std::move(hm));
  }
}

std::vector<double> ModeSolver::apply(std::size_t k, const std::vector<double>& a) const {
  std::vector<double> y(a.size());
  ops_.at(k).multiply(a, y);
  return y;
}

std::vector<double> ModeSolver::apply_high(std::size_t k, const std::vector<double>& a) const {
  const ModeDerivatives d = mode_derivatives(a, k, h_, 6);
  const double lambda = static_cast<double>(k * (k + 1));
  std::vector<double> y(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = r_[i];
    y[i] = -d.d2a[i] - 2.0 * d.da[i] / r + (lambda / (r * r) - potential_[i]) * a[i];
  }
  return y;
}

std::vector<double> ModeSolver::solve_second_order(std::size_t k,
                                                   const std::vector<double>& f) const {
  return factors_.at(k).solve(f);
}

std::vector<double> ModeSolver::solve(std::size_t k, const std::vector<double>& f) const {
  return high_.at(k).solve(f);
}

HarmonicField ModeSolver::solve(const HarmonicField& rhs, std::size_t workers) const {
  HarmonicField out;
  out.modes.resize(rhs.modes.size());
  if (rhs.modes.size() > factors_.size()) {
    throw InvalidArgument("mode solve: field has more modes than the solver");
  }
  numerics::parallel_for(rhs.modes.size(), workers,
                         [&](std::size_t k) { out.modes[k] = solve(k, rhs.modes[k]); });
  return out;
}

double ModeSolver::inverse_norm(std::size_t k) const {
  const auto& f = factors_.at(k);
  const std::size_t n = f.size();
  std::vector<double> rowsum(n, 0.0), e(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    f.solve_in_place(e);
    for (std::size_t i = 0; i < n; ++i) rowsum[i] += std::abs(e[i]);
  }
  return *std::max_element(rowsum.begin(), rowsum.end());
}

ContractionMap::ContractionMap(const ProblemParams& params, const DomainMapSpec& spec,
                               const PerturbedOptions& opts)
    : params_(params), spec_(spec), opts_(opts) {
  validate_pipeline(params);
  vp_ = solve_henon_radial(params, opts.radial);
  setup(opts);
}

ContractionMap::ContractionMap(const ProblemParams& params, const DomainMapSpec& spec,
                               const RadialProfile& vp, const PerturbedOptions& opts)
    : params_(params), spec_(spec), opts_(opts), vp_(vp) {
  validate_pipeline(params);
  setup(opts);
}

void ContractionMap::setup(const PerturbedOptions& opts) {
  if (params_.N != 3) {
    throw InvalidArgument("perturbed solve supports N = 3 only, got N = " +
                          std::to_string(params_.N));
  }
  if (!spec_.axisymmetric()) {
    throw InvalidArgument("perturbed solve needs an axisymmetric map (translation along z)");
  }
  if (!(opts.tol > 0.0) || opts.maxiter == 0) {
    throw InvalidArgument("perturbed solve: tol must be positive and maxiter nonzero");
  }
  grid_ = AxisymmetricGrid::make(opts.kmax, opts.rnodes);
  const std::size_t nr = grid_.nr(), nm = grid_.nmu();
  const double alpha = params_.alpha, p = params_.p;
  vp_value_.resize(nr);
  vp_d1_.resize(nr);
  vp_d2_.resize(nr);
  for (std::size_t i = 0; i < nr; ++i) {
    const double r = grid_.r[i];
    const auto v = vp_.at(r);
    vp_value_[i] = v.value;
    vp_d1_[i] = v.slope;
    vp_d2_[i] = -2.0 * v.slope / r - std::pow(r, alpha) * signed_pow(v.value, p);
  }
  solver_ = std::make_shared<ModeSolver>(grid_, vp_);
  std::vector<Vec3> xs;
  xs.reserve(nr * nm);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nm; ++j) xs.push_back(grid_.point(i, j));
  field_ = invert_map_from_preimages(spec_, xs);
  lt_.resize(xs.size());
  weight_.resize(xs.size());
  for (std::size_t g = 0; g < xs.size(); ++g) {
    lt_[g] = lt_coefficients(field_.points[g], spec_.t);
    if (spec_.t == 0.0) {
      // exactly r^alpha, so H_t(x, 0) vanishes to the last bit
      weight_[g] = std::pow(grid_.r[g / nm], alpha);
      continue;
    }
    const Vec3 y = spec_.forward(xs[g]);
    weight_[g] = std::pow(std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]), alpha);
  }
}

ContractionMap::NodalJet ContractionMap::jet(const HarmonicField& phi) const {
  const std::size_t nr = grid_.nr(), nm = grid_.nmu();
  const std::size_t K = std::min(phi.modes.size(), grid_.kmax + 1);
  std::vector<ModeDerivatives> d(K);
  for (std::size_t k = 0; k < K; ++k) d[k] = mode_derivatives(phi.modes[k], k, grid_.h);
  NodalJet out;
  out.value.resize(nr * nm);
  out.phi.resize(nr * nm);
  out.grad.resize(nr * nm);
  out.hess.resize(nr * nm);
  for (std::size_t i = 0; i < nr; ++i) {
    const double r = grid_.r[i];
    for (std::size_t j = 0; j < nm; ++j) {
      double f = 0, fr = 0, frr = 0, fm = 0, frm = 0, fmm = 0;
      const auto& P = grid_.P[j];
      const auto& dP = grid_.dP[j];
      const auto& d2P = grid_.d2P[j];
      for (std::size_t k = 0; k < K; ++k) {
        const double a = d[k].a[i], da = d[k].da[i], d2a = d[k].d2a[i];
        f += a * P[k];
        fr += da * P[k];
        frr += d2a * P[k];
        fm += a * dP[k];
        frm += da * dP[k];
        fmm += a * d2P[k];
      }
      const std::size_t g = i * nm + j;
      out.phi[g] = f;
      out.value[g] = vp_value_[i] + f;
      cartesian_jet(r, grid_.mu[j], vp_d1_[i] + fr, vp_d2_[i] + frr, fm, frm, fmm,
                    out.grad[g], out.hess[g]);
    }
  }
  return out;
}

std::vector<double> ContractionMap::lt_nodal(const HarmonicField& phi) const {
  const NodalJet j = jet(phi);
  std::vector<double> out(j.value.size());
  for (std::size_t g = 0; g < out.size(); ++g) {
    const auto& c = lt_[g];
    double s = 0.0;
    for (int a = 0; a < 3; ++a) {
      s += c.b[a] * j.grad[g][a];
      for (int b = 0; b < 3; ++b) s += c.A[a][b] * j.hess[g][a][b];
    }
    out[g] = s;
  }
  return out;
}

std::vector<double> ContractionMap::ht_nodal(const HarmonicField& phi) const {
  const std::size_t nr = grid_.nr(), nm = grid_.nmu();
  const std::vector<double> f = phi.synthesize(grid_);
  const double alpha = params_.alpha, p = params_.p;
  std::vector<double> out(nr * nm);
  double ratio = 0.0;
  for (std::size_t i = 0; i < nr; ++i) {
    const double r = grid_.r[i];
    const double v = vp_value_[i];
    const double ra = std::pow(r, alpha);
    const double vpm1 = std::pow(v, p - 1.0);
    const double vpp = signed_pow(v, p);
    for (std::size_t j = 0; j < nm; ++j) {
      const std::size_t g = i * nm + j;
      ratio = std::max(ratio, std::abs(f[g]) / v);
      out[g] = weight_[g] * signed_pow(v + f[g], p) - ra * vpp - p * ra * vpm1 * f[g];
    }
  }
  if (!(ratio < opts_.trust)) {
    throw NoConvergence(fmt("iterate left the trust ball: ||phi / v_p||_sup = %.6g >= %.6g",
                            ratio, opts_.trust));
  }
  return out;
}

HarmonicField ContractionMap::apply(const HarmonicField& phi) const {
  std::vector<double> rhs = lt_nodal(phi);
  const std::vector<double> h = ht_nodal(phi);
  for (std::size_t g = 0; g < rhs.size(); ++g) rhs[g] += h[g];
  return solver_->solve(project(rhs, grid_), opts_.workers);
}

std::vector<double> ContractionMap::residual_nodal(const HarmonicField& phi) const {
  const std::size_t nr = grid_.nr(), nm = grid_.nmu();
  const std::size_t K = std::min(phi.modes.size(), grid_.kmax + 1);
  std::vector<ModeDerivatives> d(K);
  for (std::size_t k = 0; k < K; ++k) d[k] = mode_derivatives(phi.modes[k], k, grid_.h, 8);
  const std::vector<double> lt = lt_nodal(phi);
  const std::vector<double> f = phi.synthesize(grid_);
  const double alpha = params_.alpha, p = params_.p;
  std::vector<double> out(nr * nm);
  for (std::size_t i = 0; i < nr; ++i) {
    const double r = grid_.r[i];
    for (std::size_t j = 0; j < nm; ++j) {
      // -Laplace phi mode by mode; -Laplace v_p = r^alpha v_p^p exactly
      double lap = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const double lambda = static_cast<double>(k * (k + 1));
        lap += (d[k].d2a[i] + 2.0 * d[k].da[i] / r - lambda * d[k].a[i] / (r * r)) *
               grid_.P[j][k];
      }
      const std::size_t g = i * nm + j;
      const double v = vp_value_[i] + f[g];
      out[g] = -lap - lt[g] - weight_[g] * signed_pow(v, p) +
               std::pow(r, alpha) * signed_pow(vp_value_[i], p);
    }
  }
  return out;
}

double ContractionMap::residual(const HarmonicField& phi, double r_lo, double r_hi) const {
  const std::vector<double> res = residual_nodal(phi);
  const std::size_t nm = grid_.nmu();
  double sup = 0.0;
  for (std::size_t g = 0; g < res.size(); ++g) {
    const double r = grid_.r[g / nm];
    if (r < r_lo || r > r_hi) continue;
    sup = std::max(sup, std::abs(res[g]));
  }
  return sup;
}

double ContractionMap::positivity_margin(const HarmonicField& phi) const {
  const std::vector<double> f = phi.synthesize(grid_);
  const std::size_t nm = grid_.nmu();
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < f.size(); ++g) {
    margin = std::min(margin, vp_value_[g / nm] + f[g]);
  }
  return margin;
}

PerturbedSolution contraction_solve(const ProblemParams& params, const DomainMapSpec& spec,
                                    const PerturbedOptions& opts) {
  validate_pipeline(params);
  const RadialProfile vp = solve_henon_radial(params, opts.radial);
  if (opts.check_certificate) {
    const auto cert = nondegeneracy_certificate(params, vp, opts.certificate_threshold);
    if (cert.degenerate) {
      throw DegenerateExponent(
          "p in forbidden set: mode " + std::to_string(cert.witness_k) +
          " is degenerate (|a_k(1)| = " + fmt("%.3g", cert.min_abs) + ")");
    }
  }
  auto map = std::make_shared<ContractionMap>(params, spec, vp, opts);
  PerturbedSolution sol;
  ContractionReport& rep = sol.report;
  rep.mode_solve_norms.resize(opts.kmax + 1);
  numerics::parallel_for(opts.kmax + 1, opts.workers, [&](std::size_t k) {
    rep.mode_solve_norms[k] = map->solver().inverse_norm(k);
  });
  for (std::size_t k = 0; k <= opts.kmax; ++k) {
    if (!(rep.mode_solve_norms[k] < opts.norm_limit)) {
      throw DegenerateExponent("p in forbidden set: mode " + std::to_string(k) +
                               fmt(" solve norm %.6g >= %.6g", rep.mode_solve_norms[k],
                                   opts.norm_limit));
    }
  }

  const AxisymmetricGrid& grid = map->grid();
  HarmonicField phi = HarmonicField::zeros(grid);
  std::vector<double> prev = phi.synthesize(grid);
  for (std::size_t n = 0; n < opts.maxiter; ++n) {
    HarmonicField next = map->apply(phi);
    const std::vector<double> cur = next.synthesize(grid);
    double inc = 0.0;
    for (std::size_t g = 0; g < cur.size(); ++g) inc = std::max(inc, std::abs(cur[g] - prev[g]));
    rep.increments.push_back(inc);
    rep.iterations = n + 1;
    phi = std::move(next);
    prev = cur;
    const std::size_t m = rep.increments.size();
    // ratios below the stopping tolerance are roundoff, not contraction
    if (m >= 2 && rep.increments[m - 2] > opts.tol) {
      rep.kappa = std::max(rep.kappa, inc / rep.increments[m - 2]);
    }
    if (inc <= opts.tol) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged) {
    throw NoConvergence(fmt("contraction did not converge in %.0f iterations (kappa = %.6g)",
                            static_cast<double>(opts.maxiter), rep.kappa));
  }
  rep.phi_sup = phi.sup_norm(grid);
  rep.positivity_margin = map->positivity_margin(phi);
  rep.positive = rep.positivity_margin > 0.0;
  rep.residual_sup = map->residual(phi);
  sol.phi = std::move(phi);
  sol.map = map;
  return sol;
}

double residual_on_ball(const PerturbedSolution& sol, double r_lo, double r_hi) {
  if (!sol.map) throw InvalidArgument("residual_on_ball: solution has no map");
  return sol.map->residual(sol.phi, r_lo, r_hi);
}

}  // namespace henon
