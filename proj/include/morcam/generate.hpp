#pragma once

#include "morcam/grid.hpp"

#include <cstdint>
#include <string>

namespace morcam {

enum class GeneratorKind {
  Constant,
  Step,
  PowerCusp,
  LogSingularity,
  RandomSigns,
  LognormalWeight,
};

GeneratorKind generator_kind_from_string(const std::string& name);
std::string to_string(GeneratorKind kind);

struct GenParams {
  Scalar value = 1.0;             // constant level / step amplitude / sign amplitude
  Scalar beta = 0.5;              // cusp exponent, in (0, 1]
  std::array<Scalar, 2> x0{0.5, 0.5};
  Scalar scale = 1.0;             // multiplies cusp / singular kernels (-1 flips sign)
  Scalar sigma = 0.5;             // lognormal width
  std::uint64_t seed = 0;
};

/// Canonical test functions at cell centers.  The log singularity is
/// clamped by adding half a cell width inside the kernel:
/// scale * log(1 / (|x - x0| + cell/2)).  Deterministic given the seed.
GridFunction generate(GeneratorKind kind, const GenParams& params, int dimension,
                      int resolution, Scalar side = 1.0);

}  // namespace morcam
