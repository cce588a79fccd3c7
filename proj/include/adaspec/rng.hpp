#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace adaspec::rng {

// Seeded helpers built directly on the mt19937 output stream. The standard
// distributions are implementation-defined, so anything that must be
// byte-reproducible across platforms goes through these instead.

// Uniform on (0, 1); never returns an endpoint.
inline double uniform01(std::mt19937& gen) {
  return (static_cast<double>(gen()) + 0.5) * (1.0 / 4294967296.0);
}

// Uniform on (-1, 1).
inline double uniform_pm1(std::mt19937& gen) {
  return 2.0 * uniform01(gen) - 1.0;
}

// Standard normal via Box-Muller (cosine branch only, stateless).
inline double gaussian(std::mt19937& gen) {
  const double u1 = uniform01(gen);
  const double u2 = uniform01(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace adaspec::rng
