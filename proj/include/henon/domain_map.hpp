#pragma once

// Perturbed balls Omega_t = {x + t psi(x) : x in B}, the inverse map
// x = y + t psi~(y), and the operator L_t that appears when -Laplace on Omega_t
// is pulled back to B:  -Laplace_y u = -Laplace_x v - L_t(v) with u(y) = v(x).

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace henon {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;  // row-major, m[a][b]

enum class MapFamily { dilation, translation, bump };

struct DomainMapSpec {
  MapFamily family = MapFamily::dilation;
  Vec3 direction{0.0, 0.0, 1.0};          // translation: unit vector e
  std::array<double, 5> coeffs{};         // bump: g(mu) = sum c_j mu^j
  double t = 0.0;

  static DomainMapSpec dilation(double t);
  static DomainMapSpec translation(const Vec3& e, double t);
  static DomainMapSpec bump(const std::array<double, 5>& c, double t);

  // psi and its Jacobian J[a][b] = d psi_a / d x_b.
  Vec3 psi(const Vec3& x) const;
  Mat3 jacobian(const Vec3& x) const;
  Vec3 forward(const Vec3& x) const;  // x + t psi(x)

  bool axisymmetric() const;
  std::string describe() const;
};

// Parses "dilation", "translation(ex,ey,ez)" or "bump(c0,...,c4)" (missing
// trailing coefficients are zero). Throws InvalidArgument.
DomainMapSpec parse_map_family(const std::string& text, double t);

// max of the spectral norm of D psi over a grid filling the closed ball.
double lipschitz_estimate(const DomainMapSpec& spec);

// Throws InvalidArgument("perturbation too large ...") unless t Lip(psi) < 1.
void require_contractive(const DomainMapSpec& spec);

struct InverseMapPoint {
  Vec3 y{};
  Vec3 x{};          // preimage, y = x + t psi(x)
  Vec3 psi_tilde{};  // (x - y) / t, or -psi(y) at t = 0
  Mat3 grad{};       // grad[i][k] = d psi~_k / d y_i
  Mat3 second{};     // second[i][k] = d^2 psi~_k / d y_i^2
  double roundtrip = 0.0;  // |x + t psi(x) - y|
};

struct InverseMapField {
  DomainMapSpec spec;
  std::vector<InverseMapPoint> points;
  double max_roundtrip = 0.0;
};

struct InverseMapOptions {
  double tol = 1e-13;
  std::size_t max_iter = 100;
  double fd_step = 1e-5;
};

// Solves x + t psi(x) = y for each y by damped Newton from the fixed-point
// guess x = y - t psi(y).
InverseMapField invert_map(const DomainMapSpec& spec, const std::vector<Vec3>& ys,
                           const InverseMapOptions& opts = {});

// Inverse data at the images y = x + t psi(x) of the given points of B.
InverseMapField invert_map_from_preimages(const DomainMapSpec& spec,
                                          const std::vector<Vec3>& xs,
                                          const InverseMapOptions& opts = {});

// Coefficients of L_t(v) = sum_{jk} A_jk v_{x_j x_k} + sum_k b_k v_{x_k}.
struct LtCoefficients {
  Mat3 A{};
  Vec3 b{};
};
LtCoefficients lt_coefficients(const InverseMapPoint& point, double t);

// L_t(v) at one point from the gradient and Hessian of v there.
double lt_apply(const InverseMapPoint& point, double t, const Vec3& grad, const Mat3& hess);

// The three sums of L_t(v) exactly as written, at every point of the field.
std::vector<double> assemble_Lt(const InverseMapField& field, const std::vector<Vec3>& grad,
                                const std::vector<Mat3>& hess);

}  // namespace henon
