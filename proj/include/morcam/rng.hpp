#pragma once

#include "morcam/grid.hpp"

#include <random>

namespace morcam {

// mt19937_64 has a standard-pinned sequence; the double conversions below
// avoid std::*_distribution, whose output is implementation-defined.

inline Scalar uniform01(std::mt19937_64& rng) {
  return static_cast<Scalar>(rng() >> 11) * 0x1.0p-53;
}

inline Scalar uniform(std::mt19937_64& rng, Scalar a, Scalar b) {
  return a + (b - a) * uniform01(rng);
}

/// Box-Muller from two pinned uniforms (the spare is discarded).
inline Scalar standard_normal(std::mt19937_64& rng) {
  Scalar u1 = uniform01(rng);
  const Scalar u2 = uniform01(rng);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace morcam
