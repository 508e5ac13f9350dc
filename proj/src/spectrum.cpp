#include "henon/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>

#include "henon/error.hpp"
#include "henon/numerics/ode.hpp"
#include "henon/numerics/parallel.hpp"
#include "henon/numerics/quadrature.hpp"
#include "henon/numerics/tridiagonal_eigen.hpp"

namespace henon {

namespace {

// p r^alpha |v|^{p-1}
double potential(const RadialProfile& vp, double r, double scale) {
  if (scale == 0.0) return 0.0;
  const double v = std::abs(vp.value(r));
  return scale * vp.p * std::pow(r, vp.weight_alpha) * std::pow(v, vp.p - 1.0);
}

void require_profile(const RadialProfile& vp, const char* who) {
  if (!(vp.dimension > 2.0)) {
    throw InvalidArgument(std::string(who) + ": profile dimension must exceed 2");
  }
  if (!(vp.p > 1.0)) throw InvalidArgument(std::string(who) + ": profile p must exceed 1");
  if (vp.size() < 2 && !vp.exact) {
    throw InvalidArgument(std::string(who) + ": empty profile");
  }
}

double extrapolate(double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; }

std::vector<double> smallest_eigenvalues(const numerics::TridiagonalPencil& pencil,
                                         std::size_t count) {
  std::vector<double> out;
  for (std::size_t k = 0; k < count; ++k) {
    const double guess = pencil.eigenvalue(k, 1e-10);
    // polish; keep the bisection value if inverse iteration wanders off
    const auto pair = pencil.inverse_iteration(guess);
    out.push_back(std::abs(pair.value - guess) < 1e-8 * std::max(1.0, std::abs(guess))
                      ? pair.value
                      : guess);
  }
  return out;
}

std::vector<double> schrodinger_levels(const RadialProfile& vp, std::size_t n,
                                       std::size_t count, const EigenOptions& opts) {
  const double m = vp.dimension;
  const double c = 0.5 * (m - 2.0);
  const double h = opts.t_max / static_cast<double>(n + 1);
  std::vector<double> diag(n), off(n - 1, -1.0 / (h * h)), mass(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = h * static_cast<double>(i + 1);
    const double r = std::exp(-t);
    const double q = c * c - std::exp(-2.0 * t) * potential(vp, r, opts.potential_scale);
    diag[i] = 2.0 / (h * h) + q;
  }
  return smallest_eigenvalues(numerics::TridiagonalPencil(diag, off, mass), count);
}

std::vector<double> direct_levels(const RadialProfile& vp, std::size_t n,
                                  std::size_t count, const EigenOptions& opts) {
  const double m = vp.dimension;
  const double h = opts.t_max / static_cast<double>(n + 1);
  std::vector<double> r(n + 2);
  for (std::size_t j = 0; j < n + 2; ++j) {
    r[j] = std::exp(-opts.t_max + h * static_cast<double>(j));
  }
  r.back() = 1.0;
  // flux weight through the face between j and j+1
  std::vector<double> w(n + 1);
  for (std::size_t j = 0; j + 1 < n + 2; ++j) {
    const double face = std::sqrt(r[j] * r[j + 1]);
    w[j] = std::pow(face, m - 1.0) / (r[j + 1] - r[j]);
  }
  std::vector<double> diag(n), off(n > 0 ? n - 1 : 0), mass(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + 1;
    const double vol = 0.5 * (r[j + 1] - r[j - 1]);
    const double rm1 = std::pow(r[j], m - 1.0);
    diag[i] = w[j - 1] + w[j] - potential(vp, r[j], opts.potential_scale) * rm1 * vol;
    mass[i] = std::pow(r[j], m - 3.0) * vol;
    if (i + 1 < n) off[i] = -w[j];
  }
  return smallest_eigenvalues(numerics::TridiagonalPencil(diag, off, mass), count);
}

template <class Levels>
std::vector<double> refined(Levels levels, const RadialProfile& vp, std::size_t count,
                            const EigenOptions& opts) {
  if (opts.nodes < 100) throw InvalidArgument("eigen solve: need at least 100 nodes");
  if (!(opts.t_max > 0.0)) throw InvalidArgument("eigen solve: t_max must be positive");
  auto coarse = levels(vp, opts.nodes, count, opts);
  if (!opts.extrapolate) return coarse;
  const auto fine = levels(vp, 2 * opts.nodes + 1, count, opts);
  for (std::size_t k = 0; k < count; ++k) coarse[k] = extrapolate(coarse[k], fine[k]);
  return coarse;
}

}  // namespace

ModeShot mode_shoot(const RadialProfile& vp, std::size_t k, const ModeShootOptions& opts) {
  require_profile(vp, "mode_shoot");
  const double m = vp.dimension;
  const double alpha = vp.weight_alpha;
  const double kd = static_cast<double>(k);
  const double damp = 2.0 * kd + m - 1.0;  // b'' + damp b'/r + V b = 0
  const double eps = opts.launch;
  const double scale = opts.potential_scale;

  // b = 1 - V(r) r^2 / ((2+alpha)(2k+m+alpha)) near the origin
  const double v_eps = potential(vp, eps, scale);
  const double denom = 2.0 * kd + m + alpha;
  const double b0 = 1.0 - v_eps * eps * eps / ((2.0 + alpha) * denom);
  const double db0 = -v_eps * eps / denom;

  auto rhs = [&vp, damp, scale](double r, const std::array<double, 2>& y,
                                std::array<double, 2>& dy) {
    dy[0] = y[1];
    dy[1] = -damp / r * y[1] - potential(vp, r, scale) * y[0];
  };
  auto stepper = numerics::make_stepper<2>(rhs, eps, std::array<double, 2>{b0, db0},
                                           {opts.tol, opts.tol}, 0.1 * eps);
  stepper.set_max_step(0.002, 0.002);

  auto traj = std::make_shared<numerics::DenseTrajectory>();
  traj->push({0.0, 1.0, 0.0, alpha == 0.0 ? -potential(vp, 0.0, scale) / (damp + 1.0) : 0.0});
  traj->push({eps, b0, db0, stepper.dydx()[1]});
  double max_abs = std::pow(eps, kd) * std::abs(b0);
  while (stepper.advance(1.0)) {
    const double r = stepper.x();
    traj->push({r, stepper.y()[0], stepper.y()[1], stepper.dydx()[1]});
    max_abs = std::max(max_abs, std::pow(r, kd) * std::abs(stepper.y()[0]));
  }

  std::shared_ptr<const numerics::DenseTrajectory> shared = traj;
  RadialFunction f = [shared, kd](double r) -> ValueAndSlope {
    r = std::clamp(r, 0.0, 1.0);
    const auto b = shared->eval(r);
    if (r == 0.0) return {kd == 0.0 ? b.value : 0.0, kd == 1.0 ? b.value : 0.0};
    const double rk = std::pow(r, kd);
    return {rk * b.value, kd * std::pow(r, kd - 1.0) * b.value + rk * b.slope};
  };
  std::vector<double> grid = vp.grid;
  if (grid.size() < 2) grid = uniform_grid(0.0, 1.0, 2001);
  ModeShot shot;
  shot.profile = sample_profile(f, grid);
  shot.profile.exact = std::make_shared<const RadialFunction>(f);
  shot.profile.dimension = m;
  shot.profile.weight_alpha = alpha;
  shot.profile.p = vp.p;
  shot.profile.central_value = shot.profile.values.front();
  for (double a : shot.profile.values) max_abs = std::max(max_abs, std::abs(a));
  shot.k = k;
  shot.lambda_k = kd * (kd + m - 2.0);
  shot.raw_boundary = stepper.y()[0];
  shot.max_abs = max_abs;
  shot.boundary_value = shot.raw_boundary / max_abs;
  return shot;
}

double nu_schrodinger(const RadialProfile& vp, const EigenOptions& opts) {
  require_profile(vp, "nu_schrodinger");
  return refined(schrodinger_levels, vp, 1, opts).front();
}

std::vector<double> nu_direct_eigenvalues(const RadialProfile& vp, std::size_t count,
                                          const EigenOptions& opts) {
  require_profile(vp, "nu_direct");
  if (count == 0) return {};
  return refined(direct_levels, vp, count, opts);
}

double rayleigh_quotient_vp(const RadialProfile& vp, std::size_t panels) {
  require_profile(vp, "rayleigh_quotient_vp");
  // in t = -log r: dr = r dt
  const double m = vp.dimension;
  const double t_end = 60.0;
  auto num = [&](double t) {
    const double r = std::exp(-t);
    const auto v = vp.at(r);
    return std::pow(r, m) * (v.slope * v.slope - potential(vp, r, 1.0) * v.value * v.value);
  };
  auto den = [&](double t) {
    const double r = std::exp(-t);
    const double v = vp.value(r);
    return std::pow(r, m - 2.0) * v * v;
  };
  return numerics::integrate(num, 0.0, t_end, panels) /
         numerics::integrate(den, 0.0, t_end, panels);
}

double potential_peak(const RadialProfile& vp) {
  require_profile(vp, "potential_peak");
  auto g = [&](double t) {
    const double r = std::exp(-t);
    return r * r * potential(vp, r, 1.0) / vp.p;
  };
  const std::size_t n = 8000;
  const double t_end = 60.0;
  const double h = t_end / static_cast<double>(n);
  std::size_t best = 0;
  double best_val = g(0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    const double val = g(h * static_cast<double>(i));
    if (val > best_val) {
      best_val = val;
      best = i;
    }
  }
  // golden-section polish on the bracketing cells
  double a = h * static_cast<double>(best > 0 ? best - 1 : 0);
  double b = h * static_cast<double>(std::min(best + 1, n));
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60; ++it) {
    const double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    if (g(x1) > g(x2)) {
      b = x2;
    } else {
      a = x1;
    }
  }
  return std::max(best_val, g(0.5 * (a + b)));
}

std::vector<double> exponent_grid(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {lo};
  return uniform_grid(lo, hi, count);
}

std::vector<double> default_sweep(int N, double alpha, std::size_t count, double margin) {
  return exponent_grid(sobolev_exponent(N), critical_exponent(N, alpha) - margin, count);
}

SpectralSample spectral_sample(int N, double alpha, double p, const SweepOptions& opts) {
  SpectralSample s;
  s.p = p;
  try {
    const RadialProfile vp = solve_henon_radial({N, alpha, p}, opts.radial);
    s.nu = nu_schrodinger(vp, opts.eigen);
    const auto direct = nu_direct_eigenvalues(vp, 2, opts.eigen);
    s.nu_direct = direct[0];
    s.second = direct[1];
    s.gap = std::abs(s.nu - s.nu_direct);
    s.ok = std::isfinite(s.nu) && std::isfinite(s.nu_direct);
    if (!s.ok) s.error = "non-finite eigenvalue";
  } catch (const std::exception& e) {
    s.ok = false;
    s.error = e.what();
  }
  return s;
}

SpectralCurve sweep_nu(int N, double alpha, const std::vector<double>& ps,
                       const SweepOptions& opts) {
  const double pc = critical_exponent(N, alpha);
  for (double p : ps) {
    if (!(p > 1.0) || !(p < pc)) {
      throw InvalidArgument("sweep_nu: exponent " + std::to_string(p) +
                            " outside (1, p_alpha(N))");
    }
  }
  SpectralCurve curve;
  curve.N = N;
  curve.alpha = alpha;
  curve.samples.resize(ps.size());
  numerics::parallel_for(ps.size(), opts.workers, [&](std::size_t i) {
    curve.samples[i] = spectral_sample(N, alpha, ps[i], opts);
  });
  return curve;
}

namespace {

double nu_at(int N, double alpha, double p, const SweepOptions& opts) {
  const RadialProfile vp = solve_henon_radial({N, alpha, p}, opts.radial);
  return nu_schrodinger(vp, opts.eigen);
}

// Bisection on g(p) = nu(p) + lambda, given g(lo) and g(hi) of opposite sign.
double bisect_root(int N, double alpha, double lambda, double lo, double hi, double g_lo,
                   const SweepOptions& opts, double p_tol) {
  while (hi - lo > p_tol) {
    const double mid = 0.5 * (lo + hi);
    const double g = nu_at(N, alpha, mid, opts) + lambda;
    if (g == 0.0) return mid;
    if ((g < 0.0) == (g_lo < 0.0)) {
      lo = mid;
      g_lo = g;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Cell {
  double lo, hi, g_lo, g_hi;
};

// Splits a cell until the sign pattern of g is resolved: returns the subcells
// holding a sign change.
void resolve_cell(int N, double alpha, double lambda, const Cell& c, std::size_t depth,
                  const SweepOptions& opts, std::vector<Cell>& out) {
  const bool change = (c.g_lo < 0.0) != (c.g_hi < 0.0);
  // both ends on one side but close to zero relative to the variation: a
  // double crossing could hide inside; look once more at finer resolution
  const double near = 0.25 * std::abs(c.g_hi - c.g_lo);
  const bool suspicious = !change && (std::abs(c.g_lo) < near || std::abs(c.g_hi) < near);
  if (depth == 0 || (!suspicious && change)) {
    if (change) out.push_back(c);
    return;
  }
  if (!suspicious) return;
  const double mid = 0.5 * (c.lo + c.hi);
  const double g_mid = nu_at(N, alpha, mid, opts) + lambda;
  resolve_cell(N, alpha, lambda, {c.lo, mid, c.g_lo, g_mid}, depth - 1, opts, out);
  resolve_cell(N, alpha, lambda, {mid, c.hi, g_mid, c.g_hi}, depth - 1, opts, out);
}

}  // namespace

DegeneracyTable find_pk(const SpectralCurve& curve, std::size_t k_max,
                        const SweepOptions& opts, const RootOptions& roots) {
  DegeneracyTable table;
  table.N = curve.N;
  table.alpha = curve.alpha;
  std::vector<const SpectralSample*> ok;
  for (const auto& s : curve.samples) {
    if (s.ok) ok.push_back(&s);
  }
  std::sort(ok.begin(), ok.end(),
            [](const SpectralSample* a, const SpectralSample* b) { return a->p < b->p; });
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double lambda = sphere_eigenvalue(curve.N, k);
    for (std::size_t i = 0; i + 1 < ok.size(); ++i) {
      const Cell cell{ok[i]->p, ok[i + 1]->p, ok[i]->nu + lambda, ok[i + 1]->nu + lambda};
      std::vector<Cell> cells;
      resolve_cell(curve.N, curve.alpha, lambda, cell, roots.max_refine, opts, cells);
      for (const Cell& c : cells) {
        DegeneracyEntry e;
        e.k = k;
        e.lambda_k = lambda;
        e.bracket_lo = c.lo;
        e.bracket_hi = c.hi;
        e.p_k = bisect_root(curve.N, curve.alpha, lambda, c.lo, c.hi, c.g_lo, opts,
                            roots.p_tol);
        const RadialProfile vp =
            solve_henon_radial({curve.N, curve.alpha, e.p_k}, opts.radial);
        e.mode_shot_residual = std::abs(mode_shoot(vp, k).boundary_value);
        table.entries.push_back(e);
      }
    }
  }
  std::sort(table.entries.begin(), table.entries.end(),
            [](const DegeneracyEntry& a, const DegeneracyEntry& b) { return a.p_k < b.p_k; });
  return table;
}

NondegeneracyReport nondegeneracy_certificate(const ProblemParams& params,
                                              const RadialProfile& vp, double threshold,
                                              const ModeShootOptions& opts) {
  validate_pipeline(params);
  NondegeneracyReport rep;
  rep.params = params;
  rep.threshold = threshold;
  rep.potential_max = params.p * potential_peak(vp);
  const double m = vp.dimension;
  std::size_t K = 0;
  while (K * (K + m - 2.0) < rep.potential_max) ++K;
  rep.K = K;
  rep.min_abs = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= K; ++k) {
    const double b = std::abs(mode_shoot(vp, k, opts).boundary_value);
    rep.boundary_values.push_back(b);
    if (b < rep.min_abs) {
      rep.min_abs = b;
      rep.witness_k = k;
    }
  }
  rep.degenerate = rep.min_abs <= threshold;
  return rep;
}

NondegeneracyReport nondegeneracy_certificate(const ProblemParams& params, double threshold,
                                              const RadialOptions& radial) {
  const RadialProfile vp = solve_henon_radial(params, radial);
  return nondegeneracy_certificate(params, vp, threshold);
}

std::optional<std::size_t> forbidden_mode_near(const ProblemParams& params, double delta,
                                               const SweepOptions& opts) {
  validate_pipeline(params);
  const double pc = critical_exponent(params);
  if (!(params.p < pc)) {
    throw Supercritical("supercritical: p = " + std::to_string(params.p) +
                        " >= p_alpha(N) = " + std::to_string(pc));
  }
  const double lo = std::max(params.p - delta, 0.5 * (1.0 + params.p));
  const double hi = std::min(params.p + delta, 0.5 * (params.p + pc));
  const double nu_lo = nu_at(params.N, params.alpha, lo, opts);
  const double nu_mid = nu_at(params.N, params.alpha, params.p, opts);
  const double nu_hi = nu_at(params.N, params.alpha, hi, opts);
  const double nu_min = std::min({nu_lo, nu_mid, nu_hi});
  for (std::size_t k = 1; sphere_eigenvalue(params.N, k) <= -nu_min + 1e-12; ++k) {
    const double lam = sphere_eigenvalue(params.N, k);
    const double a = nu_lo + lam, b = nu_mid + lam, c = nu_hi + lam;
    if (a == 0.0 || b == 0.0 || c == 0.0 || (a < 0.0) != (b < 0.0) ||
        (b < 0.0) != (c < 0.0)) {
      return k;
    }
  }
  return std::nullopt;
}

}  // namespace henon
