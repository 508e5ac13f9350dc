#include "henon/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "henon/error.hpp"
#include "henon/numerics/finite_difference.hpp"
#include "henon/numerics/quadrature.hpp"
#include "henon/spectrum.hpp"

namespace henon {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 unit_direction(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

// Solves M^T n = x for the 3x3 matrix M by Cramer's rule.
Vec3 solve_transpose(const Mat3& M, const Vec3& x) {
  Mat3 T{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) T[a][b] = M[b][a];
  const auto det = [](const Mat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  const double d = det(T);
  Vec3 out{};
  for (int c = 0; c < 3; ++c) {
    Mat3 Tc = T;
    for (int a = 0; a < 3; ++a) Tc[a][c] = x[a];
    out[c] = det(Tc) / d;
  }
  return out;
}

std::vector<double> split_numbers(const std::string& body) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const std::size_t comma = body.find(',', pos);
    const std::string item =
        body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("domain: bad number '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw InvalidArgument("domain: bad number '" + item + "'");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

double pohozaev_coefficient(const ProblemParams& params) {
  return (params.N - 2) / 2.0 - (params.N + params.alpha) / (params.p + 1.0);
}

PohozaevReport pohozaev_residual(const RadialProfile& vp, const ProblemParams& params,
                                 std::size_t panels) {
  PohozaevReport rep;
  rep.coefficient = pohozaev_coefficient(params);
  rep.panels = panels;
  rep.points_per_panel = 8;
  const double e = params.N - 1 + params.alpha;
  const double integral = numerics::integrate(
      [&](double r) {
        const double v = std::max(vp.value(r), 0.0);
        return std::pow(r, e) * std::pow(v, params.p + 1.0);
      },
      0.0, 1.0, panels, rep.points_per_panel);
  const double slope = vp.slope(1.0);
  rep.volume_term = rep.coefficient * integral;
  rep.boundary_term = 0.5 * slope * slope;
  rep.residual = rep.volume_term + rep.boundary_term;
  const double scale = std::abs(rep.volume_term) + std::abs(rep.boundary_term);
  rep.relative_residual = scale > 0.0 ? std::abs(rep.residual) / scale : 0.0;
  return rep;
}

DomainSpec DomainSpec::ball(double radius, const Vec3& center) {
  DomainSpec d;
  d.shape = DomainShape::ball;
  d.radius = radius;
  d.center = center;
  return d;
}

DomainSpec DomainSpec::ellipsoid(const Vec3& axes) {
  DomainSpec d;
  d.shape = DomainShape::ellipsoid;
  d.axes = axes;
  return d;
}

DomainSpec DomainSpec::mapped(const DomainMapSpec& map) {
  DomainSpec d;
  d.shape = DomainShape::mapped_ball;
  d.map = map;
  return d;
}

std::string DomainSpec::describe() const {
  char buf[256];
  switch (shape) {
    case DomainShape::ball:
      std::snprintf(buf, sizeof buf, "ball(%.17g,%.17g,%.17g,%.17g)", radius, center[0],
                    center[1], center[2]);
      return buf;
    case DomainShape::ellipsoid:
      std::snprintf(buf, sizeof buf, "ellipsoid(%.17g,%.17g,%.17g)", axes[0], axes[1], axes[2]);
      return buf;
    case DomainShape::mapped_ball:
      return "mapped " + map.describe();
  }
  return "";
}

DomainSpec parse_domain(const std::string& text, double t) {
  const std::size_t open = text.find('(');
  const std::string head = text.substr(0, open);
  std::vector<double> args;
  if (open != std::string::npos) {
    if (text.back() != ')') throw InvalidArgument("domain: missing ')' in '" + text + "'");
    args = split_numbers(text.substr(open + 1, text.size() - open - 2));
  }
  if (head == "ball") {
    if (args.empty()) return DomainSpec::ball();
    if (args.size() != 1 && args.size() != 4) {
      throw InvalidArgument("domain: ball takes (R) or (R,cx,cy,cz)");
    }
    if (!(args[0] > 0.0)) throw InvalidArgument("domain: ball radius must be positive");
    Vec3 c{0.0, 0.0, 0.0};
    if (args.size() == 4) c = {args[1], args[2], args[3]};
    return DomainSpec::ball(args[0], c);
  }
  if (head == "ellipsoid") {
    if (args.size() != 3) throw InvalidArgument("domain: ellipsoid takes (a,b,c)");
    for (double a : args) {
      if (!(a > 0.0)) throw InvalidArgument("domain: ellipsoid axes must be positive");
    }
    return DomainSpec::ellipsoid({args[0], args[1], args[2]});
  }
  return DomainSpec::mapped(parse_map_family(text, t));
}

const char* verdict_name(CertificateVerdict v) {
  return v == CertificateVerdict::certified_nonexistence ? "CERTIFIED-NONEXISTENCE"
                                                         : "INCONCLUSIVE";
}

double shifted_weight_eps(double alpha, double gamma, const Vec3& z, const Vec3& x) {
  Vec3 d{};
  for (int a = 0; a < 3; ++a) d[a] = z[a] + gamma * x[a];
  return alpha * gamma * (dot(x, z) + gamma * dot(x, x)) / dot(d, d);
}

CertificateReport nonexistence_certificate(const DomainSpec& domain, double shift,
                                           const ProblemParams& params,
                                           const CertificateOptions& opts) {
  const int N = params.N;
  if (N < 3) throw InvalidArgument("certificate: N must be at least 3");
  if (!(params.alpha >= 0.0)) throw InvalidArgument("certificate: alpha must be >= 0");
  if (!(params.p > sobolev_exponent(N))) {
    throw InvalidArgument(fmt("certificate: needs p > (N+2)/(N-2) = %.17g", sobolev_exponent(N)));
  }
  if (!(shift > 0.0)) throw InvalidArgument("certificate: shift must be positive");
  if (N != 3 && domain.shape != DomainShape::ball) {
    throw InvalidArgument("certificate: only balls are supported for N != 3");
  }
  const double zn = std::sqrt(dot(opts.direction, opts.direction));
  if (!(zn > 0.0)) throw InvalidArgument("certificate: direction must be nonzero");
  const Vec3 z{opts.direction[0] / zn, opts.direction[1] / zn, opts.direction[2] / zn};
  const double gamma = std::isinf(shift) ? 0.0 : 1.0 / shift;

  CertificateReport rep;
  rep.shift = shift;
  rep.gamma = gamma;
  rep.base_constant = (N - 2) / 2.0 - N / (params.p + 1.0);

  // boundary points and outward normals, theta by the midpoint rule in cos
  const std::size_t nt = opts.n_theta, np = opts.n_phi;
  std::vector<Vec3> boundary;
  boundary.reserve(nt * np + 2);
  double min_xn = std::numeric_limits<double>::infinity();
  double max_radius = 0.0;
  const auto add_boundary = [&](const Vec3& u) {
    Vec3 x{}, n{};
    switch (domain.shape) {
      case DomainShape::ball:
        for (int a = 0; a < 3; ++a) x[a] = domain.center[a] + domain.radius * u[a];
        n = u;
        break;
      case DomainShape::ellipsoid:
        for (int a = 0; a < 3; ++a) {
          x[a] = domain.axes[a] * u[a];
          n[a] = u[a] / domain.axes[a];
        }
        break;
      case DomainShape::mapped_ball: {
        x = domain.map.forward(u);
        Mat3 M = domain.map.jacobian(u);
        for (int a = 0; a < 3; ++a) {
          for (int b = 0; b < 3; ++b) M[a][b] *= domain.map.t;
          M[a][a] += 1.0;
        }
        n = solve_transpose(M, u);
        break;
      }
    }
    const double nn = std::sqrt(dot(n, n));
    min_xn = std::min(min_xn, dot(x, n) / nn);
    max_radius = std::max(max_radius, std::sqrt(dot(x, x)));
    boundary.push_back(x);
  };
  add_boundary({0.0, 0.0, 1.0});
  add_boundary({0.0, 0.0, -1.0});
  for (std::size_t i = 0; i < nt; ++i) {
    const double theta = std::acos(1.0 - 2.0 * (static_cast<double>(i) + 0.5) / nt);
    for (std::size_t j = 0; j < np; ++j) {
      add_boundary(unit_direction(theta, 2.0 * std::numbers::pi * j / np));
    }
  }
  rep.min_x_dot_normal = min_xn;
  if (min_xn < -1e-12) {
    throw InvalidArgument(
        fmt("certificate: domain is not star-shaped with respect to the origin "
            "(min x.nu = %.6g)",
            min_xn));
  }

  // the pole of the weight, -|x_m| z, must lie outside the closed domain
  if (gamma > 0.0) {
    bool inside = false;
    switch (domain.shape) {
      case DomainShape::ball: {
        double d2 = 0.0;
        for (int a = 0; a < 3; ++a) d2 += std::pow(-shift * z[a] - domain.center[a], 2);
        inside = std::sqrt(d2) <= domain.radius;
        break;
      }
      case DomainShape::ellipsoid: {
        double q = 0.0;
        for (int a = 0; a < 3; ++a) q += std::pow(shift * z[a] / domain.axes[a], 2);
        inside = q <= 1.0;
        break;
      }
      case DomainShape::mapped_ball:
        inside = shift <= max_radius;
        break;
    }
    if (inside) {
      throw InvalidArgument(fmt("certificate: shift %.6g puts the weight's pole in the domain",
                                shift));
    }
  }

  double min_eps = std::numeric_limits<double>::infinity();
  double max_eps = -std::numeric_limits<double>::infinity();
  const std::size_t nr = opts.n_radial;
  const auto visit = [&](double xz, double x2) {
    const double d2 = 1.0 + 2.0 * gamma * xz + gamma * gamma * x2;
    const double eps = params.alpha * gamma * (xz + gamma * x2) / d2;
    min_eps = std::min(min_eps, eps);
    max_eps = std::max(max_eps, eps);
    ++rep.samples;
  };
  if (domain.shape == DomainShape::ball && N > 3) {
    // x = c + R s q with q the projection of a unit vector of R^N: any |q| <= 1
    const Vec3& c = domain.center;
    const double R = domain.radius;
    for (const Vec3& xb : boundary) {
      Vec3 u{};
      for (int a = 0; a < 3; ++a) u[a] = (xb[a] - c[a]) / R;
      for (std::size_t m = 1; m <= nr; ++m) {
        const double rho = static_cast<double>(m) / nr;
        for (std::size_t l = 0; l <= nr; ++l) {
          const double s = static_cast<double>(l) / nr;
          const double xz = dot(c, z) + R * s * rho * dot(u, z);
          const double x2 = dot(c, c) + 2.0 * R * s * rho * dot(c, u) + R * R * s * s;
          visit(xz, x2);
        }
      }
    }
  } else {
    // star-shaped: the segment from the origin to each boundary point
    for (const Vec3& xb : boundary) {
      for (std::size_t l = 0; l <= nr; ++l) {
        const double s = static_cast<double>(l) / nr;
        const Vec3 x{s * xb[0], s * xb[1], s * xb[2]};
        visit(dot(x, z), dot(x, x));
      }
    }
  }
  rep.eps_sup = std::max(std::abs(min_eps), std::abs(max_eps));
  rep.margin = rep.base_constant - max_eps / (params.p + 1.0);
  rep.verdict = rep.margin > 0.0 ? CertificateVerdict::certified_nonexistence
                                 : CertificateVerdict::inconclusive;
  return rep;
}

ExteriorProfile kelvin_exterior(const RadialProfile& vp, const ProblemParams& params,
                                const ExteriorOptions& opts) {
  if (!(opts.s_max > 1.0)) throw InvalidArgument("exterior: s_max must exceed 1");
  if (opts.nodes < 16) throw InvalidArgument("exterior: too few nodes");
  const int N = params.N;
  const double p = params.p;
  ExteriorProfile ext;
  ext.N = N;
  ext.beta = kelvin_beta(params);
  const std::size_t n = opts.nodes;
  const double L = std::log(opts.s_max);
  const double hs = L / static_cast<double>(n - 1);
  ext.s.resize(n);
  ext.w.resize(n);
  ext.dw.resize(n);
  std::vector<double> dw_dsigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = j + 1 == n ? opts.s_max : std::exp(hs * static_cast<double>(j));
    const auto v = vp.at(1.0 / s);
    ext.s[j] = s;
    ext.w[j] = std::pow(s, 2.0 - N) * v.value;
    ext.dw[j] = (2.0 - N) * std::pow(s, 1.0 - N) * v.value - std::pow(s, -N) * v.slope;
    dw_dsigma[j] = s * ext.dw[j];
  }
  ext.boundary_value = ext.w[0];
  ext.min_value = *std::min_element(ext.w.begin() + 1, ext.w.end());

  // w'' = d(w')/ds = (1/s) d(w')/d(log s), sixth-order in log s
  std::vector<double> dws(ext.dw);
  for (std::size_t j = 3; j + 3 < n; ++j) {
    const double s = ext.s[j];
    const double d2w = numerics::central_d1(dws, j, hs) / s;
    const double res = -d2w - (N - 1) * ext.dw[j] / s -
                       std::pow(s, ext.beta) * std::pow(std::max(ext.w[j], 0.0), p);
    ext.residual_sup = std::max(ext.residual_sup, std::abs(res));
  }

  // least squares of log w against log s on [s_max/4, s_max]
  ext.fit_lo = opts.s_max / 4.0;
  ext.fit_hi = opts.s_max;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (ext.s[j] < ext.fit_lo * (1.0 - 1e-12)) continue;
    const double x = std::log(ext.s[j]), y = std::log(ext.w[j]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  const double md = static_cast<double>(m);
  ext.decay_exponent = -(md * sxy - sx * sy) / (md * sxx - sx * sx);
  return ext;
}

InteriorSamples kelvin_interior(const ExteriorProfile& ext) {
  InteriorSamples out;
  const std::size_t n = ext.s.size();
  out.r.resize(n);
  out.v.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = ext.s[n - 1 - j];
    const double r = 1.0 / s;
    out.r[j] = r;
    out.v[j] = std::pow(r, 2.0 - ext.N) * ext.w[n - 1 - j];
  }
  return out;
}

FastDecayReport fast_decay_pipeline(int N, double p, const FastDecayOptions& opts) {
  if (N < 3) throw InvalidArgument("fast decay: N must be at least 3");
  if (!(p > sobolev_exponent(N))) {
    throw InvalidArgument(
        fmt("fast decay: needs p > (N+2)/(N-2) = %.17g (alpha* would be <= 0)",
            sobolev_exponent(N)));
  }
  FastDecayReport rep;
  rep.params = {N, alpha_for_fast_decay(N, p), p};
  rep.beta = kelvin_beta(rep.params);
  if (opts.check_forbidden) {
    if (auto k = forbidden_mode_near(rep.params, opts.forbidden_delta)) {
      throw DegenerateExponent("p in forbidden set: mode " + std::to_string(*k) +
                               fmt(" degenerates within %.3g of p = %.17g",
                                   opts.forbidden_delta, p));
    }
  }
  const RadialProfile vp = solve_henon_radial(rep.params, opts.radial);
  rep.interior_residual = radial_residual_sup(vp);
  rep.exterior = kelvin_exterior(vp, rep.params, opts.exterior);

  if (opts.map) {
    if (N != 3) throw InvalidArgument("fast decay: the perturbed variant needs N = 3");
    PerturbedOptions po = opts.perturbed;
    po.radial = opts.radial;
    const PerturbedSolution sol = contraction_solve(rep.params, *opts.map, po);
    rep.perturbed = true;
    rep.contraction = sol.report;
    // -Laplace_Y W(Y) = |Y|^{-N-2} (-Laplace u)(y) for W(Y) = |Y|^{2-N} u(Y/|Y|^2),
    // so the exterior residual at Y = y/|y|^2 is |y|^{N+2} times the ball one.
    const std::vector<double> res = sol.map->residual_nodal(sol.phi);
    const AxisymmetricGrid& g = sol.map->grid();
    const std::size_t nm = g.nmu();
    double sup = 0.0;
    for (std::size_t i = 0; i < g.nr(); ++i) {
      if (g.r[i] < 0.01 || g.r[i] > 0.99) continue;
      for (std::size_t j = 0; j < nm; ++j) {
        const Vec3 y = opts.map->forward(g.point(i, j));
        const double ny = std::sqrt(dot(y, y));
        sup = std::max(sup, std::pow(ny, N + 2) * std::abs(res[i * nm + j]));
      }
    }
    rep.perturbed_exterior_residual = sup;
  }
  return rep;
}

}  // namespace henon
