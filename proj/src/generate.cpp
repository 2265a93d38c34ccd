#include "morcam/generate.hpp"

#include "morcam/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace morcam {

GeneratorKind generator_kind_from_string(const std::string& name) {
  if (name == "constant") return GeneratorKind::Constant;
  if (name == "step") return GeneratorKind::Step;
  if (name == "power_cusp") return GeneratorKind::PowerCusp;
  if (name == "log_singularity") return GeneratorKind::LogSingularity;
  if (name == "random_signs") return GeneratorKind::RandomSigns;
  if (name == "lognormal_weight") return GeneratorKind::LognormalWeight;
  throw std::invalid_argument("unknown generator kind: " + name);
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Constant: return "constant";
    case GeneratorKind::Step: return "step";
    case GeneratorKind::PowerCusp: return "power_cusp";
    case GeneratorKind::LogSingularity: return "log_singularity";
    case GeneratorKind::RandomSigns: return "random_signs";
    case GeneratorKind::LognormalWeight: return "lognormal_weight";
  }
  return "?";
}

GridFunction generate(GeneratorKind kind, const GenParams& params, int dimension,
                      int resolution, Scalar side) {
  if (resolution < 2) throw std::invalid_argument("generate: resolution must be >= 2");
  if (kind == GeneratorKind::PowerCusp && (!(params.beta > 0) || params.beta > 1.0))
    throw std::invalid_argument("generate: cusp exponent must be in (0, 1]");
  if (kind == GeneratorKind::LognormalWeight && !(params.sigma > 0))
    throw std::invalid_argument("generate: lognormal sigma must be > 0");

  auto dom = std::make_shared<Domain>(dimension, side, resolution);
  Array samples(dom->cell_count());

  const auto dist_to_x0 = [&](Index i) {
    const auto c = dom->coords(i);
    Scalar d2 = 0.0;
    for (int a = 0; a < dimension; ++a) {
      const Scalar d = dom->center(c[a]) - params.x0[a];
      d2 += d * d;
    }
    return std::sqrt(d2);
  };

  switch (kind) {
    case GeneratorKind::Constant:
      samples.setConstant(params.value);
      break;
    case GeneratorKind::Step:
      for (Index i = 0; i < dom->cell_count(); ++i) {
        const auto c = dom->coords(i);
        samples[i] = dom->center(c[0]) < params.x0[0] ? params.value : -params.value;
      }
      break;
    case GeneratorKind::PowerCusp:
      for (Index i = 0; i < dom->cell_count(); ++i)
        samples[i] = params.scale * std::pow(dist_to_x0(i), params.beta);
      break;
    case GeneratorKind::LogSingularity: {
      const Scalar clamp = 0.5 * dom->cell_size();
      for (Index i = 0; i < dom->cell_count(); ++i)
        samples[i] = params.scale * std::log(1.0 / (dist_to_x0(i) + clamp));
      break;
    }
    case GeneratorKind::RandomSigns: {
      std::mt19937_64 rng(params.seed);
      for (Index i = 0; i < dom->cell_count(); ++i)
        samples[i] = (rng() & 1u) ? params.value : -params.value;
      break;
    }
    case GeneratorKind::LognormalWeight: {
      std::mt19937_64 rng(params.seed);
      for (Index i = 0; i < dom->cell_count(); ++i)
        samples[i] = std::exp(params.sigma * standard_normal(rng));
      break;
    }
  }
  return GridFunction(std::move(dom), std::move(samples));
}

}  // namespace morcam
