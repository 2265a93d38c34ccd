#pragma once

#include "morcam/grid.hpp"

namespace morcam {

/// True when the local maximal competitor set for Q is the exact set of all
/// cell-aligned subcubes (cubes up to 4096 cells); beyond that a
/// dyadic-plus-half-shifted set (always including single cells) is used.
bool competitor_set_exact(const Cube& q);

/// Local (fractional) maximal function: at each active cell x of Q,
///   M_{alpha,Q} f(x) = sup over subcubes Q' of Q containing x of
///                      |Q' ∩ Ω|^{alpha/n - 1} ∫_{Q' ∩ Ω} |f|.
/// Returns a full-domain function that is zero outside Q.
GridFunction local_maximal(const GridFunction& f, const Cube& q, Scalar alpha = 0.0);

/// Pointwise sup over family cubes containing x of
/// |Q ∩ Ω|^{alpha/n - 1} ∫_{Q ∩ Ω} |f|.  Every active cell must be covered
/// by at least one cube.
GridFunction global_maximal(const GridFunction& f, const CubeFamily& family,
                            Scalar alpha = 0.0);

/// Pointwise sup over cubes of the product of the two |.|-averages.
GridFunction bilinear_maximal(const GridFunction& f1, const GridFunction& f2,
                              const CubeFamily& family);

/// b * M_alpha(f) - M_alpha(b f), with M_alpha the global maximal over the
/// family.  Formulas are applied literally on signed b (|.| sits inside the
/// averages); no sign normalization.
GridFunction commutator(const GridFunction& b, const GridFunction& f, Scalar alpha,
                        const CubeFamily& family);

/// (b1 + b2) * M(f1, f2) - M(b1 f1, f2) - M(f1, b2 f2).
GridFunction bilinear_commutator(const GridFunction& b1, const GridFunction& b2,
                                 const GridFunction& f1, const GridFunction& f2,
                                 const CubeFamily& family);

struct CharStatistic {
  Scalar p = 1.0;
  Scalar q = 1.0;
  Scalar alpha = 0.0;
  Scalar beta = 0.0;
  Scalar sup = 0.0;
  std::ptrdiff_t arg_cube = -1;
  Cube achieving;
  bool exact = true;
  std::vector<Scalar> per_cube;
};

/// Maximal-deviation statistic: sup over family cubes Q of
///   |Q|^{-beta} * ( (1/|Q|) ∫_Q |b - |Q|^{-alpha/n} M_{alpha,Q}(b)|^p )^{1/p},
/// with |Q| the clipped measure.
CharStatistic char_statistic(const GridFunction& b, const CubeFamily& family,
                             Scalar alpha, Scalar beta, Scalar p,
                             bool keep_per_cube = false);

/// Exponential-integrability form of the maximal-deviation tail bound:
/// sup over cubes of mean(exp(c |b - |Q|^{-alpha/n} M_{alpha,Q}(b)|) - 1).
/// Uniformly bounded under refinement exactly when the deviation tails
/// decay exponentially at rate beyond c.
CharStatistic exp_char_statistic(const GridFunction& b, const CubeFamily& family,
                                 Scalar alpha, Scalar c);

}  // namespace morcam
