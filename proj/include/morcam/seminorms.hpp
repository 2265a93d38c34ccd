#pragma once

#include "morcam/grid.hpp"

namespace morcam {

/// Oscillation kind entering the per-cube integrand:
///   Morrey        |f|^p
///   Campanato     |f - f_Q|^p
///   Barred        |f - |f|_Q|^p
///   Tilde         |f + |f|_Q|^p
///   AbsMinusMean  ||f| - f_Q|^p
///   AbsPlusMean   ||f| + f_Q|^p
///   InfNonneg     inf_{c>=0} |f - c|^p
///   InfNonpos     inf_{c<=0} |f - c|^p
enum class SeminormKind {
  Morrey,
  Campanato,
  Barred,
  Tilde,
  AbsMinusMean,
  AbsPlusMean,
  InfNonneg,
  InfNonpos,
};

/// Radius normalization multiplies the cube integral by rho^{-lambda}
/// (the ambient-cube convention); Volume by |Q ∩ Ω|^{-lambda/n}.  Volume
/// with lambda = n turns the integral into the plain cube average, the
/// scale on which all the lambda = n constants are stated.
enum class Normalization { Radius, Volume };

struct SeminormSpec {
  Scalar p = 1.0;
  Scalar lambda = 0.0;
  SeminormKind kind = SeminormKind::Campanato;
  Normalization normalization = Normalization::Volume;
};

/// BMO seminorm = Campanato, p = 1, lambda = n, volume normalization.
SeminormSpec bmo_spec(int dimension);

struct SeminormReport {
  SeminormSpec spec;
  Scalar sup = 0.0;   // max over cubes of the normalized p-th power
  Scalar root = 0.0;  // sup^{1/p}, the norm-scale value
  std::ptrdiff_t arg_cube = -1;
  Cube achieving;
  std::vector<Scalar> per_cube;  // filled only when requested
};

SeminormReport seminorm(const GridFunction& f, const SeminormSpec& spec,
                        const CubeFamily& family, bool keep_per_cube = false);

enum class ConstraintSign { NonNegative, NonPositive, Free };

/// Global minimizer of c -> sum |f - c|^p over the constraint set, on the
/// active cells of Q.  p = 1 uses the clipped median, p = 2 the clipped
/// mean; other p >= 1 golden-section on the convex objective.  For p < 1
/// the objective is concave between order statistics, so the minimum is
/// attained at a sample value or at the constraint boundary and an exact
/// candidate scan is used.
Scalar minimizing_constant(const GridFunction& f, const Cube& q, Scalar p,
                           ConstraintSign constraint);

struct HolderReport {
  Scalar value = 0.0;
  bool exact = true;  // false when the pair set was restricted to dyadic offsets
};

/// sup over distinct cell-center pairs of |f(x)-f(y)| / |x-y|^beta.
/// All pairs are scanned up to 4096 cells in 1-D and 64^2 in 2-D; beyond
/// that only dyadic offsets are used and the report is a lower bound.
HolderReport holder_seminorm(const GridFunction& f, Scalar beta);

/// Ratio of norm-scale (p-th root) values a/b; 0/0 reports 1, x/0 with
/// x > 0 reports +infinity.
Scalar variant_equivalence_ratio(const SeminormReport& a, const SeminormReport& b);

struct ExpIntegrability {
  Scalar c = 0.0;    // exponent inside the integrand
  Scalar sup = 0.0;  // sup over cubes of mean(exp(c |f - |f|_Q|) - 1)
  std::ptrdiff_t arg_cube = -1;
  Cube achieving;
};

/// Exponential-integrability statistic, the integrated form of the
/// oscillation tail bound: finite uniformly in the cube family exactly when
/// the |f - |f|_Q| tails decay exponentially at rate beyond c.
ExpIntegrability exp_integrability(const GridFunction& f, const CubeFamily& family,
                                   Scalar c);

}  // namespace morcam
