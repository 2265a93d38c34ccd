#pragma once

#include "morcam/grid.hpp"

namespace morcam {

struct SelectedCube {
  Cube cube;
  Scalar average = 0.0;    // mean of the driving function over the cube
  Scalar reference = 0.0;  // |f|_Q of the normalized function (generation runs)
};

/// Dyadic stopping-time selection at level tau.  Selected cubes are the
/// maximal dyadic subcubes whose driving-function average first exceeds
/// tau; every average lands in (tau, 2^n tau] because the parent average
/// was at most tau.  The good set carries the pointwise bound g <= tau.
struct CZDecomposition {
  Cube base;
  Scalar tau = 0.0;
  std::vector<SelectedCube> selected;
  std::vector<std::uint8_t> good;  // per domain cell, 1 = good cell of the base
  Scalar selected_measure = 0.0;
  Scalar good_measure = 0.0;
};

/// Requires g >= 0 on the base, a power-of-two cell extent (so the dyadic
/// halving is exact and the selection window holds), and mean(g) <= tau
/// over the base.
CZDecomposition cz_decompose(const GridFunction& g, const Cube& q0, Scalar tau);

struct Generation {
  std::vector<SelectedCube> cubes;
  Scalar total_measure = 0.0;
  /// Max over active base cells outside this generation's cubes of
  /// |f_n - |f_n|_{Q0}|^p, with f_n the seminorm-normalized function.
  Scalar off_generation_max = 0.0;
};

/// Iterated generation construction: generation 1 decomposes
/// |f_n - |f_n|_{Q0}|^p at level tau; generation i+1 decomposes, inside
/// each generation-i cube R, |f_n - |f_n|_R|^p at the same level.  f_n is
/// f scaled so that its lambda = n barred seminorm over the dyadic family
/// of Q0 equals one, which guarantees the stopping-time precondition at
/// every stage (each construction cube is itself a member of that family).
struct JNGenerations {
  Cube base;
  Scalar p = 1.0;
  Scalar tau = 0.0;
  int depth = 0;
  Scalar scale = 0.0;  // the barred seminorm value s used to normalize
  bool degenerate = false;
  std::vector<Generation> generations;
};

JNGenerations jn_generations(const GridFunction& f, const Cube& q0, Scalar p,
                             Scalar tau, int depth);

/// Distribution function samples: fractions |{x in region: |g| > t}| / |region|.
struct DecayProfile {
  std::vector<Scalar> thresholds;
  std::vector<Scalar> fractions;
};

DecayProfile distribution(const GridFunction& g, const Cube& region,
                          const std::vector<Scalar>& thresholds);

/// Log-spaced grid between the 50th and 99.5th percentile of |g| over the
/// region; this is where exponential tails are resolved on a grid.
std::vector<Scalar> default_thresholds(const GridFunction& g, const Cube& region,
                                       int count = 32);

struct DecayFit {
  Scalar c1 = 0.0;
  Scalar c2 = 0.0;
  Scalar r_squared = 0.0;
  Scalar t_lo = 0.0;
  Scalar t_hi = 0.0;
  int points = 0;
};

/// Least squares on (t, log mu) over profile points with mu > 0 inside
/// [t_lo, t_hi]; c1 = exp(intercept), c2 = -slope.  Throws if fewer than
/// three positive points fall in range.
DecayFit fit_exponential_decay(const DecayProfile& profile, Scalar t_lo, Scalar t_hi);

/// Constructive tail bound extracted from the generation construction:
/// checks mu(t) <= tau^{-floor(t / (2^{window_exp} tau s))} at every
/// profile threshold, with window_exp = n+1 (tight) or n+2 (relaxed).
bool jn_profile_bound_holds(const DecayProfile& profile, Scalar s, Scalar tau,
                            int window_exp);

}  // namespace morcam
