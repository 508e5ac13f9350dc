#pragma once

#include <cstddef>
#include <span>

namespace henon::numerics {

// Sixth-order central differences on a uniform grid; i must have three
// neighbours on each side.
inline double central_d1(std::span<const double> f, std::size_t i, double h) {
  return (-f[i - 3] + 9.0 * f[i - 2] - 45.0 * f[i - 1] + 45.0 * f[i + 1] -
          9.0 * f[i + 2] + f[i + 3]) /
         (60.0 * h);
}

inline double central_d2(std::span<const double> f, std::size_t i, double h) {
  return (2.0 * f[i - 3] - 27.0 * f[i - 2] + 270.0 * f[i - 1] - 490.0 * f[i] +
          270.0 * f[i + 1] - 27.0 * f[i + 2] + 2.0 * f[i + 3]) /
         (180.0 * h * h);
}

// Eighth-order variants, four neighbours on each side.
inline double central_d1_8(std::span<const double> f, std::size_t i, double h) {
  return (3.0 * (f[i - 4] - f[i + 4]) - 32.0 * (f[i - 3] - f[i + 3]) +
          168.0 * (f[i - 2] - f[i + 2]) - 672.0 * (f[i - 1] - f[i + 1])) /
         (840.0 * h);
}

inline double central_d2_8(std::span<const double> f, std::size_t i, double h) {
  return (-9.0 * (f[i - 4] + f[i + 4]) + 128.0 * (f[i - 3] + f[i + 3]) -
          1008.0 * (f[i - 2] + f[i + 2]) + 8064.0 * (f[i - 1] + f[i + 1]) -
          14350.0 * f[i]) /
         (5040.0 * h * h);
}

}  // namespace henon::numerics
