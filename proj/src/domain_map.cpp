#include "henon/domain_map.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "henon/error.hpp"

namespace henon {

namespace {

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Vec3 axpy(double s, const Vec3& x, const Vec3& y) {
  return {y[0] + s * x[0], y[1] + s * x[1], y[2] + s * x[2]};
}

Mat3 identity() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

Mat3 matmul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Mat3 inverse(const Mat3& m) {
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  if (!(std::abs(det) > 1e-300)) {
    throw InvalidArgument("perturbation too large: singular map Jacobian");
  }
  Mat3 inv{};
  inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
  inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
  inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
  inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
  inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
  return inv;
}

Vec3 mat_vec(const Mat3& m, const Vec3& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
          m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
          m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

// largest singular value by power iteration on J^T J
double spectral_norm(const Mat3& j) {
  Mat3 jt{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) jt[a][b] = j[b][a];
  const Mat3 g = matmul(jt, j);
  Vec3 v{0.577, 0.578, 0.576};
  double lam = 0.0;
  for (int it = 0; it < 100; ++it) {
    const Vec3 w = mat_vec(g, v);
    const double n = norm(w);
    if (n == 0.0) return 0.0;
    lam = n;
    v = {w[0] / n, w[1] / n, w[2] / n};
  }
  return std::sqrt(lam);
}

double bump_g(const std::array<double, 5>& c, double mu) {
  return c[0] + mu * (c[1] + mu * (c[2] + mu * (c[3] + mu * c[4])));
}

double bump_dg(const std::array<double, 5>& c, double mu) {
  return c[1] + mu * (2.0 * c[2] + mu * (3.0 * c[3] + mu * 4.0 * c[4]));
}

// psi~ Jacobian in the J[k][i] = d psi~_k / d y_i convention, from the preimage
Mat3 inverse_jacobian(const DomainMapSpec& spec, const Vec3& x) {
  const Mat3 d = spec.jacobian(x);
  Mat3 m = identity();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) m[a][b] += spec.t * d[a][b];
  Mat3 g = matmul(d, inverse(m));
  for (auto& row : g)
    for (double& e : row) e = -e;
  return g;
}

Vec3 solve_preimage(const DomainMapSpec& spec, const Vec3& y, const InverseMapOptions& opts) {
  const double t = spec.t;
  if (t == 0.0) return y;
  Vec3 x = axpy(-t, spec.psi(y), y);
  auto residual = [&](const Vec3& z) { return sub(spec.forward(z), y); };
  Vec3 f = residual(x);
  double fn = norm(f);
  const double target = opts.tol * std::max(1.0, norm(y));
  for (std::size_t it = 0; it < opts.max_iter && fn > target; ++it) {
    const Mat3 d = spec.jacobian(x);
    Mat3 m = identity();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) m[a][b] += t * d[a][b];
    const Vec3 dx = mat_vec(inverse(m), f);
    double step = 1.0;
    for (int half = 0; half < 40; ++half) {
      const Vec3 trial = axpy(-step, dx, x);
      const Vec3 ft = residual(trial);
      const double ftn = norm(ft);
      if (ftn < fn || half == 39) {
        x = trial;
        f = ft;
        fn = ftn;
        break;
      }
      step *= 0.5;
    }
  }
  if (!(fn <= 10.0 * target)) {
    throw InvalidArgument("perturbation too large: inverse map iteration did not converge");
  }
  return x;
}

std::vector<double> parse_numbers(const std::string& body) {
  std::vector<double> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (...) {
      throw InvalidArgument("map family: bad number '" + item + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw InvalidArgument("map family: bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

DomainMapSpec DomainMapSpec::dilation(double t) {
  DomainMapSpec s;
  s.family = MapFamily::dilation;
  s.t = t;
  return s;
}

DomainMapSpec DomainMapSpec::translation(const Vec3& e, double t) {
  const double n = norm(e);
  if (!(n > 0.0)) throw InvalidArgument("translation map: direction must be nonzero");
  DomainMapSpec s;
  s.family = MapFamily::translation;
  s.direction = {e[0] / n, e[1] / n, e[2] / n};
  s.t = t;
  return s;
}

DomainMapSpec DomainMapSpec::bump(const std::array<double, 5>& c, double t) {
  DomainMapSpec s;
  s.family = MapFamily::bump;
  s.coeffs = c;
  s.t = t;
  return s;
}

Vec3 DomainMapSpec::psi(const Vec3& x) const {
  switch (family) {
    case MapFamily::dilation:
      return x;
    case MapFamily::translation:
      return direction;
    case MapFamily::bump: {
      // eta(r) g(mu) x / r with eta = r^2 (3 - 2r)
      const double r = norm(x);
      if (r == 0.0) return {0.0, 0.0, 0.0};
      const double f = (3.0 * r - 2.0 * r * r) * bump_g(coeffs, x[2] / r);
      return {f * x[0], f * x[1], f * x[2]};
    }
  }
  return {0.0, 0.0, 0.0};
}

Mat3 DomainMapSpec::jacobian(const Vec3& x) const {
  switch (family) {
    case MapFamily::dilation:
      return identity();
    case MapFamily::translation:
      return Mat3{};
    case MapFamily::bump: {
      const double r = norm(x);
      if (r == 0.0) return Mat3{};
      const double mu = x[2] / r;
      const double q = 3.0 * r - 2.0 * r * r;
      const double dq = 3.0 - 4.0 * r;
      const double g = bump_g(coeffs, mu);
      const double dg = bump_dg(coeffs, mu);
      const double f = q * g;
      Mat3 j{};
      for (int b = 0; b < 3; ++b) {
        const double dmu = ((b == 2 ? 1.0 : 0.0) - mu * x[b] / r) / r;
        const double df = dq * g * x[b] / r + q * dg * dmu;
        for (int a = 0; a < 3; ++a) j[a][b] = (a == b ? f : 0.0) + x[a] * df;
      }
      return j;
    }
  }
  return Mat3{};
}

Vec3 DomainMapSpec::forward(const Vec3& x) const { return axpy(t, psi(x), x); }

bool DomainMapSpec::axisymmetric() const {
  if (family != MapFamily::translation) return true;
  return std::abs(direction[0]) < 1e-15 && std::abs(direction[1]) < 1e-15;
}

std::string DomainMapSpec::describe() const {
  char buf[256];
  switch (family) {
    case MapFamily::dilation:
      return "dilation";
    case MapFamily::translation:
      std::snprintf(buf, sizeof buf, "translation(%.17g,%.17g,%.17g)", direction[0],
                    direction[1], direction[2]);
      return buf;
    case MapFamily::bump:
      std::snprintf(buf, sizeof buf, "bump(%.17g,%.17g,%.17g,%.17g,%.17g)", coeffs[0],
                    coeffs[1], coeffs[2], coeffs[3], coeffs[4]);
      return buf;
  }
  return "";
}

DomainMapSpec parse_map_family(const std::string& text, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw InvalidArgument("map scale t must be finite and non-negative");
  }
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s == "dilation") return DomainMapSpec::dilation(t);
  const auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') {
    throw InvalidArgument("unknown map family '" + text +
                          "' (expected dilation, translation(e) or bump(c0..c4))");
  }
  const std::string name = s.substr(0, open);
  const auto args = parse_numbers(s.substr(open + 1, s.size() - open - 2));
  if (name == "translation") {
    if (args.size() != 3) throw InvalidArgument("translation needs three components");
    return DomainMapSpec::translation({args[0], args[1], args[2]}, t);
  }
  if (name == "bump") {
    if (args.empty() || args.size() > 5) {
      throw InvalidArgument("bump needs one to five coefficients");
    }
    std::array<double, 5> c{};
    std::copy(args.begin(), args.end(), c.begin());
    return DomainMapSpec::bump(c, t);
  }
  throw InvalidArgument("unknown map family '" + name + "'");
}

double lipschitz_estimate(const DomainMapSpec& spec) {
  double lip = 0.0;
  const int nr = 24, nmu = 41, nphi = 8;
  for (int i = 0; i <= nr; ++i) {
    const double r = static_cast<double>(i) / nr;
    for (int j = 0; j < nmu; ++j) {
      const double mu = -1.0 + 2.0 * j / (nmu - 1);
      const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
      for (int k = 0; k < nphi; ++k) {
        const double ph = 2.0 * M_PI * k / nphi;
        const Vec3 x{r * s * std::cos(ph), r * s * std::sin(ph), r * mu};
        lip = std::max(lip, spectral_norm(spec.jacobian(x)));
      }
    }
  }
  return lip;
}

void require_contractive(const DomainMapSpec& spec) {
  if (!(spec.t >= 0.0)) throw InvalidArgument("map scale t must be non-negative");
  const double lip = lipschitz_estimate(spec);
  if (!(spec.t * lip < 1.0)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "perturbation too large: t * Lip(psi) = %.6g >= 1",
                  spec.t * lip);
    throw InvalidArgument(buf);
  }
}

InverseMapField invert_map(const DomainMapSpec& spec, const std::vector<Vec3>& ys,
                           const InverseMapOptions& opts) {
  require_contractive(spec);
  InverseMapField field;
  field.spec = spec;
  field.points.reserve(ys.size());
  const double h = opts.fd_step;
  for (const Vec3& y : ys) {
    InverseMapPoint pt;
    pt.y = y;
    pt.x = solve_preimage(spec, y, opts);
    pt.roundtrip = norm(sub(spec.forward(pt.x), y));
    if (spec.t > 0.0) {
      pt.psi_tilde = sub(pt.x, y);
      for (double& c : pt.psi_tilde) c /= spec.t;
    } else {
      pt.psi_tilde = spec.psi(y);
      for (double& c : pt.psi_tilde) c = -c;
    }
    const Mat3 g = inverse_jacobian(spec, pt.x);
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) pt.grad[i][k] = g[k][i];
    for (int i = 0; i < 3; ++i) {
      Vec3 yp = y, ym = y;
      yp[i] += h;
      ym[i] -= h;
      const Mat3 gp = inverse_jacobian(spec, solve_preimage(spec, yp, opts));
      const Mat3 gm = inverse_jacobian(spec, solve_preimage(spec, ym, opts));
      for (int k = 0; k < 3; ++k) pt.second[i][k] = (gp[k][i] - gm[k][i]) / (2.0 * h);
    }
    field.max_roundtrip = std::max(field.max_roundtrip, pt.roundtrip);
    field.points.push_back(pt);
  }
  return field;
}

InverseMapField invert_map_from_preimages(const DomainMapSpec& spec,
                                          const std::vector<Vec3>& xs,
                                          const InverseMapOptions& opts) {
  std::vector<Vec3> ys;
  ys.reserve(xs.size());
  for (const Vec3& x : xs) ys.push_back(spec.forward(x));
  InverseMapField field = invert_map(spec, ys, opts);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dev = norm(sub(field.points[i].x, xs[i]));
    field.points[i].roundtrip = std::max(field.points[i].roundtrip, dev);
    field.max_roundtrip = std::max(field.max_roundtrip, dev);
  }
  return field;
}

LtCoefficients lt_coefficients(const InverseMapPoint& point, double t) {
  LtCoefficients c;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      double gg = 0.0;
      for (int i = 0; i < 3; ++i) gg += point.grad[i][j] * point.grad[i][k];
      c.A[j][k] = t * (point.grad[j][k] + point.grad[k][j]) + t * t * gg;
    }
  }
  for (int k = 0; k < 3; ++k) {
    double lap = 0.0;
    for (int i = 0; i < 3; ++i) lap += point.second[i][k];
    c.b[k] = t * lap;
  }
  return c;
}

double lt_apply(const InverseMapPoint& point, double t, const Vec3& grad, const Mat3& hess) {
  double first = 0.0, second = 0.0, third = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) first += hess[i][k] * point.grad[i][k];
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) second += grad[k] * point.second[i][k];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) third += hess[j][k] * point.grad[i][j] * point.grad[i][k];
  return 2.0 * t * first + t * second + t * t * third;
}

std::vector<double> assemble_Lt(const InverseMapField& field, const std::vector<Vec3>& grad,
                                const std::vector<Mat3>& hess) {
  if (grad.size() != field.points.size() || hess.size() != field.points.size()) {
    throw InvalidArgument("assemble_Lt: derivative data missing for some grid points");
  }
  std::vector<double> out(field.points.size());
  for (std::size_t g = 0; g < out.size(); ++g) {
    out[g] = lt_apply(field.points[g], field.spec.t, grad[g], hess[g]);
  }
  return out;
}

}  // namespace henon
