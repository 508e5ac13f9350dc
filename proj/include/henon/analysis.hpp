#pragma once

// Diagnostics built on the radial and perturbed solvers: the Pohozaev balance,
// a one-sided nonexistence certificate for shifted weights, and the Kelvin
// transform to exterior domains.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "henon/domain_map.hpp"
#include "henon/perturbed.hpp"
#include "henon/problem.hpp"
#include "henon/profile.hpp"
#include "henon/radial.hpp"

namespace henon {

// c * int_0^1 r^{N-1+alpha} v^{p+1} dr + |v'(1)|^2 / 2 = 0, surface measure
// factored out, with c = (N-2)/2 - (N+alpha)/(p+1).
struct PohozaevReport {
  double coefficient = 0.0;
  double volume_term = 0.0;
  double boundary_term = 0.0;
  double residual = 0.0;           // volume_term + boundary_term
  double relative_residual = 0.0;  // |residual| / (|volume| + |boundary|)
  std::size_t panels = 0;
  std::size_t points_per_panel = 0;
};

double pohozaev_coefficient(const ProblemParams& params);

PohozaevReport pohozaev_residual(const RadialProfile& vp, const ProblemParams& params,
                                 std::size_t panels = 4096);

// Bounded domains in R^3 for the certificate. Balls may be used for any N:
// their samples are taken in a three-dimensional slice, which sees every value
// of (x.z, |x|^2) the full ball does.
enum class DomainShape { ball, ellipsoid, mapped_ball };

struct DomainSpec {
  DomainShape shape = DomainShape::ball;
  Vec3 center{0.0, 0.0, 0.0};  // ball
  double radius = 1.0;         // ball
  Vec3 axes{1.0, 1.0, 1.0};    // ellipsoid, centred at the origin
  DomainMapSpec map;           // mapped_ball: {x + t psi(x) : |x| < 1}

  static DomainSpec ball(double radius = 1.0, const Vec3& center = {0.0, 0.0, 0.0});
  static DomainSpec ellipsoid(const Vec3& axes);
  static DomainSpec mapped(const DomainMapSpec& map);
  std::string describe() const;
};

// Parses "ball", "ball(R)", "ball(R,cx,cy,cz)", "ellipsoid(a,b,c)" or a map
// family accepted by parse_map_family (with the given t).
DomainSpec parse_domain(const std::string& text, double t = 0.0);

struct CertificateOptions {
  Vec3 direction{0.0, 0.0, 1.0};  // z, normalized internally
  std::size_t n_theta = 48;
  std::size_t n_phi = 96;
  std::size_t n_radial = 32;
};

enum class CertificateVerdict { certified_nonexistence, inconclusive };
const char* verdict_name(CertificateVerdict v);

struct CertificateReport {
  CertificateVerdict verdict = CertificateVerdict::inconclusive;
  double shift = 0.0;           // |x_m|
  double gamma = 0.0;           // 1 / |x_m|
  double base_constant = 0.0;   // (N-2)/2 - N/(p+1)
  double margin = 0.0;          // min of base - eps/(p+1) over the samples
  double eps_sup = 0.0;         // sup |eps|
  double min_x_dot_normal = 0.0;
  std::size_t samples = 0;
};

// eps(x) = alpha gamma (x.z + gamma |x|^2) / |z + gamma x|^2.
double shifted_weight_eps(double alpha, double gamma, const Vec3& z, const Vec3& x);

// Certified iff min over the domain of (N-2)/2 - N/(p+1) - eps/(p+1) > 0;
// otherwise inconclusive. Requires p > (N+2)/(N-2), a domain star-shaped with
// respect to the origin, and the pole -|x_m| z outside the domain. Throws
// InvalidArgument. shift = +inf gives gamma = 0.
CertificateReport nonexistence_certificate(const DomainSpec& domain, double shift,
                                           const ProblemParams& params,
                                           const CertificateOptions& opts = {});

// w(s) = s^{2-N} v(1/s) on log-spaced s in [1, s_max].
struct ExteriorProfile {
  int N = 3;
  double beta = 0.0;
  std::vector<double> s, w, dw;
  double boundary_value = 0.0;  // w(1)
  double residual_sup = 0.0;    // sup |-w'' - (N-1) w'/s - s^beta w^p|
  double decay_exponent = 0.0;  // -slope of log w against log s
  double fit_lo = 0.0, fit_hi = 0.0;
  double min_value = 0.0;       // min of w over s > 1
};

struct ExteriorOptions {
  double s_max = 100.0;
  std::size_t nodes = 2001;
};

ExteriorProfile kelvin_exterior(const RadialProfile& vp, const ProblemParams& params,
                                const ExteriorOptions& opts = {});

// The transform back: v(r) = r^{2-N} w(1/r) at r = 1/s_j, ascending in r.
struct InteriorSamples {
  std::vector<double> r, v;
};
InteriorSamples kelvin_interior(const ExteriorProfile& ext);

struct FastDecayOptions {
  // the fit window [s_max/4, s_max] must sit where v_p(1/s) is flat
  ExteriorOptions exterior{1000.0, 4001};
  RadialOptions radial;
  double forbidden_delta = 1e-3;
  bool check_forbidden = true;
  std::optional<DomainMapSpec> map;  // also solve on the perturbed ball (N = 3)
  PerturbedOptions perturbed;
};

struct FastDecayReport {
  ProblemParams params;  // alpha = alpha*
  double beta = 0.0;
  double interior_residual = 0.0;
  ExteriorProfile exterior;
  bool perturbed = false;
  ContractionReport contraction;
  double perturbed_exterior_residual = 0.0;
};

// alpha* = p (N - 2) - N - 2 makes the Kelvin weight vanish; solves the
// weighted interior problem, Kelvin-transforms it and fits the decay. Throws
// InvalidArgument for p <= (N+2)/(N-2) and DegenerateExponent when p is
// within forbidden_delta of a degenerate exponent.
FastDecayReport fast_decay_pipeline(int N, double p, const FastDecayOptions& opts = {});

}  // namespace henon
