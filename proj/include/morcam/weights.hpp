#pragma once

#include "morcam/grid.hpp"
#include "morcam/maximal.hpp"

#include <cstdint>
#include <optional>

namespace morcam {

/// Strictly positive grid function.
class Weight {
 public:
  explicit Weight(GridFunction values);
  const GridFunction& values() const { return values_; }
  const Domain& domain() const { return values_.domain(); }

 private:
  GridFunction values_;
};

struct A1Tag {};
struct ApTag {
  Scalar p = 2.0;
};
struct ApqTag {
  Scalar p = 1.0;
  Scalar q = 1.0;
};
using WeightClass = std::variant<A1Tag, ApTag, ApqTag>;

struct WeightReport {
  std::string class_tag;  // "A1" | "Ap" | "Apq"
  Scalar p = 0.0;
  Scalar q = 0.0;
  Scalar constant = 0.0;
  std::ptrdiff_t arg_cube = -1;
  Cube achieving;
};

/// sup over the family of the defining product:
///   A1:   avg(w) * max(1/w)            (cells are atoms, ess sup = max)
///   Ap:   avg(w) * avg(w^{-1/(p-1)})^{p-1},           p > 1
///   Apq:  (avg w^q)^{1/q} * (avg w^{-p'})^{1/p'},     1 <= p <= q
/// (for Apq with p = 1 the second factor is max(1/w)).
WeightReport muckenhoupt_constant(const Weight& w, const WeightClass& cls,
                                  const CubeFamily& family);

/// Largest q in the grid with (avg_Q w^q)^{1/q} <= C * avg_Q w on every
/// family cube; empty when no grid value passes.
std::optional<Scalar> reverse_holder_exponent(const Weight& w, const CubeFamily& family,
                                              Scalar C, const std::vector<Scalar>& q_grid);

enum class SubsetPolicyKind {
  Halves,            // axis halves of each cube
  Dyadic,            // dyadic sub-boxes of each cube
  DyadicPlusRandom,  // dyadic plus seeded random cell subsets
};
struct SubsetPolicy {
  SubsetPolicyKind kind = SubsetPolicyKind::DyadicPlusRandom;
  int random_count = 64;
  std::uint64_t seed = 0;
};

/// Comparability exponents fitted on sampled (S, Q) pairs:
///   (|S|/|Q|)^L <= C * w(S)/w(Q)   and   w(S)/w(Q) <= C * (|S|/|Q|)^epsilon.
/// epsilon / L are the extreme log-log ratios over the sample; C is the
/// envelope constant exp(2 * rmse) around the through-origin regression
/// slope, so both inequalities hold on the training sample by construction.
struct ComparisonFit {
  Scalar epsilon = 0.0;
  Scalar L = 0.0;
  Scalar C = 1.0;
  Index pairs = 0;
};

ComparisonFit measure_comparison_exponents(const Weight& w, const CubeFamily& family,
                                           const SubsetPolicy& policy);

/// Check the fitted inequalities on a fresh subset sample.
bool comparison_fit_holds(const ComparisonFit& fit, const Weight& w,
                          const CubeFamily& family, const SubsetPolicy& policy,
                          Scalar tolerance = 1e-9);

struct RubioWeight {
  Weight weight;
  Scalar tail_bound = 0.0;          // 2 * ||M^K g||_inf / (2B)^K
  Scalar measured_step_ratio = 0.0; // ||Mg||_inf / ||g||_inf on the grid
  Scalar B = 0.0;
  int depth = 0;
};

/// Truncated iteration sum_{k=0..K} M^k g / (2B)^k with M^0 g = |g| and
/// M the global maximal over the family.  Rejects B below the measured
/// single-step sup-norm ratio.
RubioWeight rubio_de_francia(const GridFunction& g, Scalar B, int K,
                             const CubeFamily& family);

/// Weighted deviation statistic: sup over cubes of
///   |Q|^{alpha/n} ( ∫_Q |b - |Q|^{-alpha/n} M_{alpha,Q} b|^q w^q )^{1/q}
///   / ( ∫_Q w^p )^{1/p},
/// under the exponent relation 1/p - 1/q = alpha/n (checked to 1e-12).
CharStatistic weighted_char_statistic(const GridFunction& b, const Weight& w, Scalar p,
                                      Scalar q, Scalar alpha, const CubeFamily& family);

}  // namespace morcam
