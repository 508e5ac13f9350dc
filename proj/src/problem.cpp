#include "henon/problem.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "henon/error.hpp"

namespace henon {

namespace {

void require_N(double N) {
  if (!(N >= 3.0)) {
    throw InvalidArgument("dimension N must be at least 3, got " + std::to_string(N));
  }
}

void require_alpha_transform(double alpha) {
  if (!(alpha > -2.0)) {
    throw InvalidArgument("weight exponent alpha must exceed -2, got " +
                          std::to_string(alpha));
  }
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(r);
}

// Shared body of both directions: out(s) = scale * in(s^exponent).
RadialProfile change_variable(const RadialProfile& in, double scale,
                              double exponent) {
  const std::size_t n = in.size() >= 2 ? in.size() : 2001;
  const double end = in.grid.empty() ? 1.0 : std::pow(in.grid.back(), 1.0 / exponent);
  auto source = std::make_shared<RadialProfile>(in);
  RadialFunction f = [source, scale, exponent](double s) -> ValueAndSlope {
    if (s <= 0.0) {
      return {scale * source->value(0.0), 0.0};
    }
    const double r = std::pow(s, exponent);
    const ValueAndSlope v = source->at(r);
    return {scale * v.value, scale * v.slope * exponent * r / s};
  };
  RadialProfile out = sample_profile(f, uniform_grid(0.0, end, n));
  if (in.exact) out.exact = std::make_shared<const RadialFunction>(f);
  out.p = in.p;
  out.central_value = out.values.front();
  return out;
}

}  // namespace

void validate_pipeline(const ProblemParams& params) {
  require_N(params.N);
  if (!(params.alpha >= 0.0)) {
    throw InvalidArgument("alpha must be non-negative, got " +
                          std::to_string(params.alpha));
  }
  if (!(params.p > 1.0)) {
    throw InvalidArgument("p must exceed 1, got " + std::to_string(params.p));
  }
}

double critical_exponent(int N, double alpha) {
  require_N(N);
  return (N + 2.0 + 2.0 * alpha) / (N - 2.0);
}

double sobolev_exponent(int N) { return critical_exponent(N, 0.0); }

double fractional_dimension(double N, double alpha) {
  require_alpha_transform(alpha);
  return 2.0 * (N + alpha) / (2.0 + alpha);
}

double kelvin_beta(const ProblemParams& params) {
  return (params.N - 2.0) * params.p - params.N - 2.0 - params.alpha;
}

double alpha_for_fast_decay(int N, double p) {
  require_N(N);
  if (!(p > sobolev_exponent(N))) {
    throw InvalidArgument("fast decay needs p > (N+2)/(N-2) = " +
                          std::to_string(sobolev_exponent(N)));
  }
  return p * (N - 2.0) - N - 2.0;
}

double sphere_eigenvalue(int N, std::size_t k) {
  const double kd = static_cast<double>(k);
  return kd * (kd + N - 2.0);
}

SphericalSpectrum spherical_spectrum(int N, std::size_t k_max) {
  require_N(N);
  SphericalSpectrum s;
  s.N = N;
  const auto n = static_cast<std::size_t>(N);
  for (std::size_t k = 0; k <= k_max; ++k) {
    // dim of degree-k harmonics: C(N+k-1, k) - C(N+k-3, k-2)
    double mult = binomial(n + k - 1, k);
    if (k >= 2) mult -= binomial(n + k - 3, k - 2);
    s.entries.push_back({k, sphere_eigenvalue(N, k), static_cast<std::size_t>(mult)});
  }
  return s;
}

RadialProfile to_fractional_dimension(const RadialProfile& u) {
  const double alpha = u.weight_alpha;
  require_alpha_transform(alpha);
  if (!(u.p > 1.0)) throw InvalidArgument("change of variables needs p > 1");
  const double a = 1.0 + 0.5 * alpha;
  RadialProfile w = change_variable(u, std::pow(a, -2.0 / (u.p - 1.0)), 1.0 / a);
  w.dimension = fractional_dimension(u.dimension, alpha);
  w.weight_alpha = 0.0;
  if (u.first_zero_R0) w.first_zero_R0 = u.first_zero_R0;
  return w;
}

RadialProfile from_fractional_dimension(const RadialProfile& w, int N, double alpha) {
  require_alpha_transform(alpha);
  require_N(N);
  if (!(w.p > 1.0)) throw InvalidArgument("change of variables needs p > 1");
  const double m = fractional_dimension(N, alpha);
  if (w.dimension != 0.0 && std::abs(w.dimension - m) > 1e-12 * m) {
    throw InvalidArgument("profile dimension " + std::to_string(w.dimension) +
                          " does not match N(alpha) = " + std::to_string(m));
  }
  if (w.weight_alpha != 0.0) {
    throw InvalidArgument("fractional-dimension profile must be unweighted");
  }
  const double a = 1.0 + 0.5 * alpha;
  RadialProfile u = change_variable(w, std::pow(a, 2.0 / (w.p - 1.0)), a);
  u.dimension = N;
  u.weight_alpha = alpha;
  if (w.first_zero_R0) u.first_zero_R0 = w.first_zero_R0;
  return u;
}

}  // namespace henon
