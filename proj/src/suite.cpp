#include "morcam/suite.hpp"

#include "morcam/czd.hpp"
#include "morcam/generate.hpp"
#include "morcam/maximal.hpp"
#include "morcam/rng.hpp"
#include "morcam/seminorms.hpp"
#include "morcam/weights.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace morcam {

namespace {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// helpers

CubeFamily family_for(const SuiteConfig& cfg, const Domain& dom,
                      const std::optional<Cube>& base = {}) {
  if (cfg.family == "anchored")
    return enumerate_cubes(dom, AnchoredExhaustivePolicy{}, base);
  if (cfg.family == "dyadic") return enumerate_cubes(dom, DyadicPolicy{}, base);
  if (cfg.family == "auto") return default_family(dom, base);
  throw std::invalid_argument("suite: unknown family policy `" + cfg.family + "`");
}

GridFunction random_uniform(std::uint64_t seed, int res, int dim = 1, Scalar lo = -1.0,
                            Scalar hi = 1.0) {
  auto dom = std::make_shared<Domain>(dim, 1.0, res);
  std::mt19937_64 rng(seed);
  Array s(dom->cell_count());
  for (Index i = 0; i < s.size(); ++i) s[i] = uniform(rng, lo, hi);
  return GridFunction(std::move(dom), std::move(s));
}

/// Random trigonometric polynomial: resolution-independent, so refinement
/// chains sample the same underlying function.
GridFunction random_trig(std::uint64_t seed, int res) {
  auto dom = std::make_shared<Domain>(1, 1.0, res);
  std::mt19937_64 rng(seed);
  constexpr int kModes = 8;
  Scalar amp[kModes], phase[kModes];
  for (int k = 0; k < kModes; ++k) {
    amp[k] = uniform(rng, -1.0, 1.0) / (k + 1);
    phase[k] = uniform(rng, 0.0, 6.283185307179586);
  }
  Array s(dom->cell_count());
  for (Index i = 0; i < s.size(); ++i) {
    const Scalar x = dom->center(static_cast<int>(i));
    Scalar v = 0.0;
    for (int k = 0; k < kModes; ++k)
      v += amp[k] * std::cos(6.283185307179586 * (k + 1) * x + phase[k]);
    s[i] = v;
  }
  return GridFunction(std::move(dom), std::move(s));
}

GridFunction shifted_negative(const GridFunction& f) {
  const Scalar top = f.samples().maxCoeff();
  return GridFunction(f.domain_ptr(), f.samples() - top - 1.0);
}

std::vector<std::pair<std::string, GridFunction>> corpus(const SuiteConfig& cfg) {
  std::vector<std::pair<std::string, GridFunction>> out;
  GenParams gp;
  const int r1 = cfg.res_1d, r2 = cfg.res_2d;
  gp.value = 2.5;
  out.emplace_back("constant+", generate(GeneratorKind::Constant, gp, 1, r1));
  gp.value = -1.5;
  out.emplace_back("constant-", generate(GeneratorKind::Constant, gp, 1, r1));
  gp.value = 1.0;
  out.emplace_back("step", generate(GeneratorKind::Step, gp, 1, r1));
  gp.beta = 0.5;
  out.emplace_back("cusp_half", generate(GeneratorKind::PowerCusp, gp, 1, r1));
  gp.beta = 1.0;
  out.emplace_back("cusp_one", generate(GeneratorKind::PowerCusp, gp, 1, r1));
  gp.scale = 1.0;
  out.emplace_back("log_sing", generate(GeneratorKind::LogSingularity, gp, 1, r1));
  gp.scale = -1.0;
  out.emplace_back("neg_log_sing", generate(GeneratorKind::LogSingularity, gp, 1, r1));
  gp.scale = 1.0;
  gp.seed = cfg.seed;
  out.emplace_back("signs_a", generate(GeneratorKind::RandomSigns, gp, 1, r1));
  gp.seed = cfg.seed + 1;
  out.emplace_back("signs_b", generate(GeneratorKind::RandomSigns, gp, 1, r1));
  gp.seed = cfg.seed + 2;
  gp.sigma = 0.75;
  out.emplace_back("lognormal", generate(GeneratorKind::LognormalWeight, gp, 1, r1));
  out.emplace_back("cusp_shifted_neg",
                   shifted_negative(out[3].second));
  // 2-D members exercise the dimensional constants.
  gp = GenParams{};
  gp.value = 1.5;
  out.emplace_back("constant_2d", generate(GeneratorKind::Constant, gp, 2, r2));
  out.emplace_back("step_2d", generate(GeneratorKind::Step, gp, 2, r2));
  gp.seed = cfg.seed + 3;
  out.emplace_back("signs_2d", generate(GeneratorKind::RandomSigns, gp, 2, r2));
  out.emplace_back("log_sing_2d", generate(GeneratorKind::LogSingularity, gp, 2, r2));
  return out;
}

struct Checker {
  CheckResult res;
  explicit Checker(std::string tag, Scalar tol) {
    res.tag = std::move(tag);
    res.tolerance = tol;
  }
  void require(bool ok, const std::string& what) {
    if (!ok && res.pass) {
      res.pass = false;
      res.witness = what;
    }
  }
  void note(const std::string& key, Scalar value) { res.measured.emplace_back(key, value); }
};

SeminormSpec spec_of(Scalar p, Scalar lambda, SeminormKind kind, Normalization norm) {
  SeminormSpec s;
  s.p = p;
  s.lambda = lambda;
  s.kind = kind;
  s.normalization = norm;
  return s;
}

Scalar tail_quantile(const GridFunction& g, const Cube& region, Scalar q) {
  std::vector<Scalar> v;
  for_each_active_cell(g.domain(), region, [&](Index i) {
    const Scalar a = std::abs(g[i]);
    if (a > 0) v.push_back(a);
  });
  std::sort(v.begin(), v.end());
  const std::size_t idx = static_cast<std::size_t>(
      std::min<Scalar>(q * (v.size() - 1), v.size() - 1.0));
  return v[idx];
}

// ---------------------------------------------------------------------------
// criteria

// Morrey embedding with the explicit forward constant 2^p, plus reverse
// stability under one refinement.
CheckResult c1_embedding(const SuiteConfig& cfg) {
  Checker ck("embedding-morrey", cfg.tolerance);
  Scalar worst_forward = 0.0;
  Scalar worst_drift = 1.0;
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed = cfg.seed + 101 * t;
    const GridFunction coarse = random_trig(seed, cfg.res_1d);
    const GridFunction fine = random_trig(seed, 2 * cfg.res_1d);
    std::vector<CubeFamily> fams;
    fams.push_back(enumerate_cubes(coarse.domain(), AnchoredExhaustivePolicy{}));
    fams.push_back(enumerate_cubes(coarse.domain(), DyadicPolicy{}));
    for (Scalar p : cfg.p_set)
      for (Scalar lam : cfg.lambda_set) {
        for (const CubeFamily& fam : fams) {
          const Scalar barred =
              seminorm(coarse, spec_of(p, lam, SeminormKind::Barred, Normalization::Radius), fam)
                  .sup;
          const Scalar morrey =
              seminorm(coarse, spec_of(p, lam, SeminormKind::Morrey, Normalization::Radius), fam)
                  .sup;
          const Scalar cap = std::pow(2.0, p) * morrey;
          worst_forward = std::max(worst_forward, barred / cap);
          std::ostringstream w;
          w << "seed=" << seed << " p=" << p << " lambda=" << lam << " family="
            << fam.policy_name;
          ck.require(barred <= cap * (1.0 + cfg.tolerance), "forward constant: " + w.str());
        }
        // Reverse direction: morrey/barred ratio, coarse vs refined grid.
        const CubeFamily fam_c = enumerate_cubes(coarse.domain(), AnchoredExhaustivePolicy{});
        const CubeFamily fam_f = enumerate_cubes(fine.domain(), AnchoredExhaustivePolicy{});
        const auto ratio = [&](const GridFunction& f, const CubeFamily& fam) {
          const auto a =
              seminorm(f, spec_of(p, lam, SeminormKind::Morrey, Normalization::Radius), fam);
          const auto b =
              seminorm(f, spec_of(p, lam, SeminormKind::Barred, Normalization::Radius), fam);
          return variant_equivalence_ratio(a, b);
        };
        const Scalar rc = ratio(coarse, fam_c), rf = ratio(fine, fam_f);
        std::ostringstream w;
        w << "reverse ratio drift: seed=" << seed << " p=" << p << " lambda=" << lam;
        ck.require(std::isfinite(rc) && std::isfinite(rf), "reverse ratio finite: " + w.str());
        const Scalar drift = rf > rc ? rf / rc : rc / rf;
        worst_drift = std::max(worst_drift, drift);
        ck.require(drift <= 2.0, w.str());
      }
  }
  ck.note("max_forward_over_cap", worst_forward);
  ck.note("max_reverse_drift", worst_drift);
  return ck.res;
}

// The lambda = n chain: campanato <= 2 barred, sup f- <= barred/2,
// barred <= 3 abs-minus-mean, on the whole corpus.
CheckResult c2_chain(const SuiteConfig& cfg) {
  Checker ck("bmo-chain", cfg.tolerance);
  Scalar worst = 0.0;
  for (const auto& [name, f] : corpus(cfg)) {
    const Domain& dom = f.domain();
    const Scalar n = dom.dimension();
    const CubeFamily fam = family_for(cfg, dom);
    const Scalar camp =
        seminorm(f, spec_of(1, n, SeminormKind::Campanato, Normalization::Volume), fam).sup;
    const Scalar barred =
        seminorm(f, spec_of(1, n, SeminormKind::Barred, Normalization::Volume), fam).sup;
    const Scalar amm =
        seminorm(f, spec_of(1, n, SeminormKind::AbsMinusMean, Normalization::Volume), fam).sup;
    const Scalar neg = extremes(f).neg_sup;
    ck.require(camp <= 2.0 * barred * (1.0 + cfg.tolerance), name + ": campanato <= 2 barred");
    ck.require(neg <= 0.5 * barred * (1.0 + cfg.tolerance) + 1e-300,
               name + ": sup f- <= barred/2");
    ck.require(barred <= 3.0 * amm * (1.0 + cfg.tolerance), name + ": barred <= 3 amm");
    if (barred > 0) worst = std::max(worst, camp / (2.0 * barred));
  }
  ck.note("max_campanato_over_2barred", worst);
  return ck.res;
}

// Constrained-constant characterization: inf <= barred <= 2 inf.
CheckResult c3_inf_constant(const SuiteConfig& cfg) {
  Checker ck("inf-constant", cfg.tolerance);
  Scalar worst = 0.0;
  for (const auto& [name, f] : corpus(cfg)) {
    const Domain& dom = f.domain();
    const Scalar n = dom.dimension();
    const CubeFamily fam = family_for(cfg, dom);
    const Scalar inf_nn =
        seminorm(f, spec_of(1, n, SeminormKind::InfNonneg, Normalization::Volume), fam).sup;
    const Scalar barred =
        seminorm(f, spec_of(1, n, SeminormKind::Barred, Normalization::Volume), fam).sup;
    ck.require(inf_nn <= barred * (1.0 + cfg.tolerance), name + ": inf <= barred");
    ck.require(barred <= 2.0 * inf_nn * (1.0 + cfg.tolerance), name + ": barred <= 2 inf");
    if (inf_nn > 0) worst = std::max(worst, barred / (2.0 * inf_nn));
  }
  ck.note("max_barred_over_2inf", worst);
  return ck.res;
}

// Stopping-time window (tau, 2^n tau] and geometric measure decay.
CheckResult c4_cz_generations(const SuiteConfig& cfg) {
  Checker ck("cz-generations", cfg.tolerance);
  Scalar worst_window = 0.0, worst_decay = 0.0;
  long selected_total = 0;
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed = cfg.seed + 977 * t;
    GridFunction f = [&] {
      if (t % 3 == 0) {
        GenParams gp;
        gp.seed = seed;
        return generate(GeneratorKind::RandomSigns, gp, 1, cfg.res_1d);
      }
      if (t % 3 == 1) {
        // Singular profiles drive the generation tree deep.
        GenParams gp;
        std::mt19937_64 rng(seed);
        gp.x0 = {uniform(rng, 0.2, 0.8), 0.5};
        return generate(GeneratorKind::LogSingularity, gp, 1, cfg.res_1d);
      }
      return random_uniform(seed, cfg.res_1d);
    }();
    const Scalar p = (t % 2 == 0) ? 1.0 : 0.5;
    const Scalar tau = (t % 2 == 0) ? cfg.tau : 1.5;
    const Cube q0 = full_cube(f.domain());
    const JNGenerations gens = jn_generations(f, q0, p, tau, cfg.depth);
    if (gens.degenerate) continue;
    const Scalar window_cap = std::pow(2.0, f.domain().dimension()) * tau;
    for (std::size_t gi = 0; gi < gens.generations.size(); ++gi) {
      const Generation& g = gens.generations[gi];
      selected_total += static_cast<long>(g.cubes.size());
      for (const SelectedCube& sel : g.cubes) {
        worst_window = std::max(worst_window, sel.average / window_cap);
        ck.require(sel.average > tau,
                   "selection window lower bound, seed=" + std::to_string(seed));
        ck.require(sel.average <= window_cap * (1.0 + cfg.tolerance),
                   "selection window upper bound, seed=" + std::to_string(seed));
      }
      const Scalar cap = std::pow(tau, -static_cast<Scalar>(gi + 1)) * q0.measure;
      worst_decay = std::max(worst_decay, g.total_measure / cap);
      ck.require(g.total_measure <= cap * (1.0 + cfg.tolerance),
                 "generation measure decay, seed=" + std::to_string(seed) +
                     " generation=" + std::to_string(gi + 1));
    }
  }
  ck.note("max_window_fraction", worst_window);
  ck.note("max_decay_fraction", worst_decay);
  ck.note("selected_cubes", static_cast<Scalar>(selected_total));
  ck.require(selected_total > 0, "no cube was ever selected; the window check is vacuous");
  return ck.res;
}

// Exponential decay of |f - |f|_Q| for the clamped log singularity, plus
// the constructive tail bound at every grid threshold.
CheckResult c5_jn_decay(const SuiteConfig& cfg) {
  Checker ck("jn-decay", cfg.fit_r2_min);
  GenParams gp;
  GridFunction f = generate(GeneratorKind::LogSingularity, gp, 1, cfg.res_fine);
  const Cube q0 = full_cube(f.domain());
  const Scalar ref = cube_stats(f, q0, 1.0).abs_mean;
  const GridFunction dev(f.domain_ptr(), (f.samples() - ref).abs());
  const std::vector<Scalar> ts = default_thresholds(dev, q0);
  const DecayProfile prof = distribution(dev, q0, ts);
  const DecayFit fit =
      fit_exponential_decay(prof, tail_quantile(dev, q0, 0.90), tail_quantile(dev, q0, 0.995));
  ck.note("c2", fit.c2);
  ck.note("r_squared", fit.r_squared);
  ck.note("fit_points", fit.points);
  ck.require(fit.c2 > 0, "fitted c2 must be positive");
  ck.require(fit.r_squared >= cfg.fit_r2_min, "log-linear fit r^2");

  const CubeFamily dyadic = enumerate_cubes(f.domain(), DyadicPolicy{});
  const Scalar s =
      seminorm(f, spec_of(1, 1, SeminormKind::Barred, Normalization::Volume), dyadic).sup;
  ck.note("seminorm_scale", s);
  const int window_exp = f.domain().dimension() + 2;
  ck.require(jn_profile_bound_holds(prof, s, cfg.tau, window_exp),
             "constructive tail bound at a grid threshold");
  return ck.res;
}

// Pointwise maximal sandwich, exact on the discrete competitor set.
CheckResult c6_sandwich(const SuiteConfig& cfg) {
  Checker ck("maximal-sandwich", cfg.identity_tol);
  const int res = cfg.res_maximal;
  Scalar worst = 0.0;
  for (int t = 0; t < cfg.maximal_trials; ++t) {
    const GridFunction f = random_uniform(cfg.seed + 31 * t, res);
    const Domain& dom = f.domain();
    const CubeFamily fam = enumerate_cubes(dom, DyadicPolicy{});
    for (Scalar alpha : cfg.alpha_set) {
      for (const Cube& q : fam.cubes) {
        const GridFunction m0 = local_maximal(f, q, 0.0);
        const GridFunction ma = local_maximal(f, q, alpha);
        const Scalar absavg = cube_stats(f, q, 1.0).abs_mean;
        const Scalar norm = std::pow(q.measure, -alpha / dom.dimension());
        for_each_active_cell(dom, q, [&](Index i) {
          const Scalar mid = norm * ma[i];
          worst = std::max(worst, absavg - mid);
          worst = std::max(worst, mid - m0[i]);
          ck.require(absavg <= mid + cfg.identity_tol, "lower sandwich bound");
          ck.require(mid <= m0[i] + cfg.identity_tol, "upper sandwich bound");
        });
      }
    }
  }
  ck.note("max_violation", worst);
  return ck.res;
}

// Commutator necessity identity on an indicator, linear and bilinear.
CheckResult c7_necessity(const SuiteConfig& cfg) {
  Checker ck("commutator-necessity", cfg.identity_tol);
  const int res = 16;
  std::vector<std::uint8_t> mask(res, 0);
  for (int i = 4; i <= 11; ++i) mask[i] = 1;
  auto dom = std::make_shared<Domain>(1, 1.0, res, mask);
  const Cube q = make_cube(*dom, {4, 0}, {11, 0});
  const CubeFamily fam = enumerate_cubes(*dom, AnchoredExhaustivePolicy{}, q);
  const GridFunction chi(dom, Array::Ones(dom->cell_count()));

  Scalar worst = 0.0;
  for (int t = 0; t < cfg.maximal_trials; ++t) {
    std::mt19937_64 rng(cfg.seed + 13 * t);
    Array bs(dom->cell_count());
    for (Index i = 0; i < bs.size(); ++i) bs[i] = uniform(rng, -3.0, 3.0);
    const GridFunction b(dom, std::move(bs));
    const GridFunction com = commutator(b, chi, 0.0, fam);
    const GridFunction mq = local_maximal(b, q, 0.0);
    for_each_active_cell(*dom, q, [&](Index i) {
      const Scalar expect = b[i] - mq[i];
      worst = std::max(worst, std::abs(com[i] - expect));
      ck.require(std::abs(com[i] - expect) <= cfg.identity_tol,
                 "linear necessity identity, trial " + std::to_string(t));
    });
  }
  const GridFunction bil = bilinear_maximal(chi, chi, fam);
  for_each_active_cell(*dom, q, [&](Index i) {
    worst = std::max(worst, std::abs(bil[i] - 1.0));
    ck.require(std::abs(bil[i] - 1.0) <= cfg.identity_tol, "bilinear indicator identity");
  });
  ck.note("max_deviation", worst);
  return ck.res;
}

// Sign discrimination of the maximal-deviation statistic under refinement.
CheckResult c8_discrimination(const SuiteConfig& cfg) {
  Checker ck("sign-discrimination", 0.0);
  const std::vector<int> chain{cfg.res_fine / 4, cfg.res_fine / 2, cfg.res_fine};
  const auto stats = [&](Scalar sign) {
    std::vector<Scalar> out;
    for (int res : chain) {
      GenParams gp;
      gp.scale = sign;
      const GridFunction b = generate(GeneratorKind::LogSingularity, gp, 1, res);
      const CubeFamily fam = enumerate_cubes(b.domain(), DyadicPolicy{});
      out.push_back(char_statistic(b, fam, 0.0, 0.0, 1.0).sup);
    }
    return out;
  };

  const std::vector<Scalar> pos = stats(1.0);
  for (std::size_t i = 0; i < pos.size(); ++i)
    ck.note("positive_res" + std::to_string(chain[i]), pos[i]);
  for (std::size_t i = 1; i < pos.size(); ++i) {
    const Scalar r = pos[i] / pos[i - 1];
    ck.note("positive_ratio_" + std::to_string(i), r);
    ck.require(r <= 1.5 && r >= 1.0 / 1.5, "bounded-negative-part statistic drifts");
  }

  const std::vector<Scalar> neg = stats(-1.0);
  for (std::size_t i = 0; i < neg.size(); ++i)
    ck.note("negative_res" + std::to_string(chain[i]), neg[i]);
  for (std::size_t i = 1; i < neg.size(); ++i) {
    const Scalar r = neg[i] / neg[i - 1];
    ck.note("negative_ratio_" + std::to_string(i), r);
    ck.require(r >= 1.2, "unbounded-negative-part statistic must grow by >= 20% per step");
  }
  ck.note("negative_ratio_total", neg.back() / neg.front());
  return ck.res;
}

// Integral characterization of nonnegative Holder functions.
CheckResult c9_holder(const SuiteConfig& cfg) {
  Checker ck("holder-characterization", cfg.tolerance);
  const int n = 1;
  for (Scalar beta : cfg.beta_set) {
    GenParams gp;
    gp.beta = beta;
    const GridFunction f = generate(GeneratorKind::PowerCusp, gp, n, cfg.res_1d);
    const CubeFamily fam = enumerate_cubes(f.domain(), AnchoredExhaustivePolicy{});
    const Scalar holder = holder_seminorm(f, beta).value;
    const Scalar scaled =
        seminorm(f, spec_of(1, n + beta, SeminormKind::Barred, Normalization::Volume), fam).sup;
    const Scalar cap = std::pow(static_cast<Scalar>(n), beta / 2.0) * holder;
    std::ostringstream which;
    which << "beta=" << beta;
    ck.note("scaled_barred_beta" + std::to_string(beta), scaled);
    ck.note("holder_beta" + std::to_string(beta), holder);
    ck.require(scaled <= cap * (1.0 + cfg.tolerance),
               "scaled oscillation exceeds the Holder cap, " + which.str());
    const Scalar inf_crit =
        seminorm(f, spec_of(1, n + beta, SeminormKind::InfNonneg, Normalization::Radius), fam)
            .sup;
    ck.note("inf_criterion_beta" + std::to_string(beta), inf_crit);
    ck.require(std::isfinite(inf_crit), "inf-criterion must be finite, " + which.str());

    // Shifted-negative version must blow up under refinement.
    const auto scaled_stat = [&](int res) {
      const GridFunction base = generate(GeneratorKind::PowerCusp, gp, n, res);
      const GridFunction g = shifted_negative(base);
      const CubeFamily f2 = enumerate_cubes(g.domain(), AnchoredExhaustivePolicy{});
      return seminorm(g, spec_of(1, n + beta, SeminormKind::Barred, Normalization::Volume), f2)
          .sup;
    };
    const Scalar coarse = scaled_stat(cfg.res_1d);
    const Scalar fine = scaled_stat(2 * cfg.res_1d);
    ck.note("shifted_growth_beta" + std::to_string(beta), fine / coarse);
    ck.require(fine >= 1.1 * coarse, "shifted-negative statistic must grow, " + which.str());
  }
  return ck.res;
}

// Iterated-maximal weight construction.
CheckResult c10_rubio(const SuiteConfig& cfg) {
  Checker ck("rubio-iteration", cfg.identity_tol);
  const int res = cfg.res_maximal;
  const int depth = 16;
  Scalar worst = 0.0;
  for (int t = 0; t < cfg.maximal_trials; ++t) {
    const GridFunction g = random_uniform(cfg.seed + 57 * t, res, 1, -2.0, 2.0);
    const Domain& dom = g.domain();
    const CubeFamily fam = enumerate_cubes(dom, AnchoredExhaustivePolicy{});
    const GridFunction mg =
        global_maximal(GridFunction(g.domain_ptr(), g.samples().abs()), fam, 0.0);
    const Scalar ratio = mg.samples().maxCoeff() / g.samples().abs().maxCoeff();
    const RubioWeight rw = rubio_de_francia(g, ratio, depth, fam);
    const GridFunction& r = rw.weight.values();
    const GridFunction mr = global_maximal(r, fam, 0.0);
    for (Index i = 0; i < dom.cell_count(); ++i) {
      if (!dom.active(i)) continue;
      ck.require(std::abs(g[i]) <= r[i], "pointwise domination |g| <= Rg");
      const Scalar cap = 2.0 * rw.B * r[i] + rw.tail_bound;
      worst = std::max(worst, mr[i] / cap);
      ck.require(mr[i] <= cap * (1.0 + cfg.identity_tol),
                 "M(Rg) <= 2B Rg + tail, trial " + std::to_string(t));
    }
  }
  ck.note("max_mrg_over_cap", worst);
  return ck.res;
}

// Weight sanity: unit weight constant, Jensen lower bound, weighted
// statistic reduction.
CheckResult c11_weight_sanity(const SuiteConfig& cfg) {
  Checker ck("weight-sanity", cfg.identity_tol);
  const int res = cfg.res_1d;
  auto dom = std::make_shared<Domain>(1, 1.0, res);
  const CubeFamily fam = enumerate_cubes(*dom, AnchoredExhaustivePolicy{});
  const Weight unit(GridFunction(dom, Array::Ones(dom->cell_count())));
  for (Scalar p : {1.5, 2.0, 3.0}) {
    const WeightReport rep = muckenhoupt_constant(unit, ApTag{p}, fam);
    ck.require(std::abs(rep.constant - 1.0) <= cfg.identity_tol, "unit weight Ap constant");
  }
  Scalar min_constant = std::numeric_limits<Scalar>::infinity();
  for (int t = 0; t < 5; ++t) {
    GenParams gp;
    gp.seed = cfg.seed + 7 * t;
    const Weight w(generate(GeneratorKind::LognormalWeight, gp, 1, res));
    const WeightReport rep = muckenhoupt_constant(w, ApTag{2.0}, fam);
    min_constant = std::min(min_constant, rep.constant);
    ck.require(rep.constant >= 1.0 - cfg.identity_tol, "Ap constant below one");
  }
  ck.note("min_ap_constant", min_constant);

  GenParams gp;
  const GridFunction b = generate(GeneratorKind::LogSingularity, gp, 1, res);
  const CubeFamily fam_b = enumerate_cubes(b.domain(), AnchoredExhaustivePolicy{});
  const Weight unit_b(GridFunction(b.domain_ptr(), Array::Ones(b.domain().cell_count())));
  const Scalar weighted =
      weighted_char_statistic(b, unit_b, 2.0, 2.0, 0.0, fam_b).sup;
  const Scalar plain = char_statistic(b, fam_b, 0.0, 0.0, 2.0).sup;
  ck.note("weighted_reduction_rel_gap",
          std::abs(weighted - plain) / std::max(1.0, std::abs(plain)));
  ck.require(std::abs(weighted - plain) <=
                 cfg.identity_tol * std::max(1.0, std::abs(plain)),
             "weighted statistic reduction at unit weight");
  return ck.res;
}

// ---------------------------------------------------------------------------
// registry-only checks

// Decay of |f - c_Q| for the p < 1 constrained-constant normalization.
CheckResult jncp_decay(const SuiteConfig& cfg) {
  Checker ck("jncp", cfg.fit_r2_min);
  GenParams gp;
  const GridFunction f = generate(GeneratorKind::LogSingularity, gp, 1, cfg.res_fine / 2);
  const Cube q0 = full_cube(f.domain());
  const Scalar c = minimizing_constant(f, q0, 0.5, ConstraintSign::NonNegative);
  ck.note("c_q", c);
  const GridFunction dev(f.domain_ptr(), (f.samples() - c).abs());
  const DecayProfile prof = distribution(dev, q0, default_thresholds(dev, q0));
  const DecayFit fit =
      fit_exponential_decay(prof, tail_quantile(dev, q0, 0.90), tail_quantile(dev, q0, 0.995));
  ck.note("c2", fit.c2);
  ck.note("r_squared", fit.r_squared);
  ck.require(fit.c2 > 0, "fitted c2 must be positive");
  ck.require(fit.r_squared >= cfg.fit_r2_min, "log-linear fit r^2");
  return ck.res;
}

// Exponential integrability of |b - M_Q b|, the integrated form of the
// maximal-deviation tail bound: uniformly bounded under refinement for a
// bounded negative part, blowing up for an unbounded one.
CheckResult jnm1_exp_integrability(const SuiteConfig& cfg) {
  Checker ck("jnm1", 2.0);
  const Scalar c = 1.0;
  const auto stat = [&](Scalar sign, int res) {
    GenParams gp;
    gp.scale = sign;
    const GridFunction b = generate(GeneratorKind::LogSingularity, gp, 1, res);
    const CubeFamily fam = enumerate_cubes(b.domain(), DyadicPolicy{});
    return exp_char_statistic(b, fam, 0.0, c).sup;
  };
  const Scalar pos_coarse = stat(1.0, cfg.res_fine / 4);
  const Scalar pos_fine = stat(1.0, cfg.res_fine / 2);
  ck.note("positive_coarse", pos_coarse);
  ck.note("positive_fine", pos_fine);
  ck.require(std::isfinite(pos_fine) && pos_fine > 0, "statistic must be finite");
  const Scalar drift = pos_fine > pos_coarse ? pos_fine / pos_coarse : pos_coarse / pos_fine;
  ck.note("positive_drift", drift);
  ck.require(drift <= 2.0, "bounded-negative-part statistic must be refinement-stable");

  const Scalar neg_coarse = stat(-1.0, cfg.res_fine / 4);
  const Scalar neg_fine = stat(-1.0, cfg.res_fine / 2);
  ck.note("negative_growth", neg_fine / neg_coarse);
  ck.require(neg_fine >= 2.0 * neg_coarse,
             "unbounded-negative-part statistic must blow up under refinement");
  return ck.res;
}

// Fractional variant: sandwich (criterion) plus deviation decay report.
CheckResult jnmalpha_check(const SuiteConfig& cfg) {
  CheckResult res = c6_sandwich(cfg);
  res.tag = "jnmalpha";
  GenParams gp;
  const GridFunction b = generate(GeneratorKind::LogSingularity, gp, 1, cfg.res_fine / 2);
  const Cube q0 = full_cube(b.domain());
  const Scalar alpha = 0.5;
  const GridFunction m = local_maximal(b, q0, alpha);
  const Scalar norm = std::pow(q0.measure, -alpha / b.domain().dimension());
  const GridFunction dev(b.domain_ptr(), (b.samples() - norm * m.samples()).abs());
  const DecayProfile prof = distribution(dev, q0, default_thresholds(dev, q0));
  const DecayFit fit =
      fit_exponential_decay(prof, tail_quantile(dev, q0, 0.90), tail_quantile(dev, q0, 0.995));
  res.measured.emplace_back("fractional_c2", fit.c2);
  res.measured.emplace_back("fractional_r_squared", fit.r_squared);
  if (!(fit.c2 > 0) && res.pass) {
    res.pass = false;
    res.witness = "fractional deviation tail must decay";
  }
  return res;
}

// Local maximal boundedness on the Holder scale: the per-run constant K
// with stat <= K * H must be stable under refinement.
CheckResult mlip_check(const SuiteConfig& cfg) {
  Checker ck("mlip", 2.0);
  const Scalar beta = 0.5;
  const auto k_of = [&](int res) {
    GenParams gp;
    gp.beta = beta;
    const GridFunction f = generate(GeneratorKind::PowerCusp, gp, 1, res);
    const CubeFamily fam = enumerate_cubes(f.domain(), DyadicPolicy{});
    const Scalar stat = char_statistic(f, fam, 0.0, beta, 1.0).sup;
    const Scalar holder = holder_seminorm(f, beta).value;
    return stat / holder;
  };
  const Scalar k_coarse = k_of(cfg.res_1d);
  const Scalar k_fine = k_of(2 * cfg.res_1d);
  ck.note("k_coarse", k_coarse);
  ck.note("k_fine", k_fine);
  const Scalar ratio = k_fine > k_coarse ? k_fine / k_coarse : k_coarse / k_fine;
  ck.note("ratio", ratio);
  ck.require(std::isfinite(k_coarse) && std::isfinite(k_fine), "K must be finite");
  ck.require(ratio <= 2.0, "K must be stable within x2 across a refinement");
  return ck.res;
}

// Scaled decay |f - M_Q f| > t |Q|^beta for a Holder function.
CheckResult jnlip_check(const SuiteConfig& cfg) {
  Checker ck("jnlip", 0.0);
  const Scalar beta = 0.5;
  GenParams gp;
  gp.beta = beta;
  const GridFunction f = generate(GeneratorKind::PowerCusp, gp, 1, cfg.res_fine / 2);
  const Domain& dom = f.domain();
  // Left-half cube, so the |Q|^beta threshold scale is non-trivial.
  const Cube q = make_cube(dom, {0, 0}, {dom.resolution() / 2 - 1, 0});
  const GridFunction m = local_maximal(f, q, 0.0);
  const Scalar scale = std::pow(q.measure, beta);
  Array d = ((f.samples() - m.samples()).abs() / scale).eval();
  // Restrict to the cube: distribution only reads cells of q.
  const GridFunction dev(f.domain_ptr(), std::move(d));
  const DecayProfile prof = distribution(dev, q, default_thresholds(dev, q));
  const DecayFit fit =
      fit_exponential_decay(prof, tail_quantile(dev, q, 0.50), tail_quantile(dev, q, 0.995));
  ck.note("c2", fit.c2);
  ck.note("r_squared", fit.r_squared);
  ck.require(fit.c2 > 0, "scaled deviation tail must decay");
  return ck.res;
}

CheckResult combine(std::string tag, std::vector<CheckResult> parts) {
  CheckResult out;
  out.tag = std::move(tag);
  for (CheckResult& part : parts) {
    out.tolerance = std::max(out.tolerance, part.tolerance);
    out.runtime_ms += part.runtime_ms;
    for (auto& kv : part.measured)
      out.measured.emplace_back(part.tag + "." + kv.first, kv.second);
    if (!part.pass && out.pass) {
      out.pass = false;
      out.witness = part.tag + ": " + part.witness;
    }
  }
  return out;
}

}  // namespace

CheckResult run_criterion(int number, const SuiteConfig& cfg) {
  switch (number) {
    case 1: return c1_embedding(cfg);
    case 2: return c2_chain(cfg);
    case 3: return c3_inf_constant(cfg);
    case 4: return c4_cz_generations(cfg);
    case 5: return c5_jn_decay(cfg);
    case 6: return c6_sandwich(cfg);
    case 7: return c7_necessity(cfg);
    case 8: return c8_discrimination(cfg);
    case 9: return c9_holder(cfg);
    case 10: return c10_rubio(cfg);
    case 11: return c11_weight_sanity(cfg);
    default: throw std::invalid_argument("run_criterion: number must be 1..11");
  }
}

const std::vector<std::string>& registered_checks() {
  static const std::vector<std::string> tags{
      "thm2.1", "jn3.1", "def3.5", "pc1",  "jncp",      "jnm1",
      "jnmalpha", "cmain", "mlip",  "jnlip", "weighted5", "bilinear6"};
  return tags;
}

CheckResult run_check(const std::string& tag, const SuiteConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult res;
  if (tag == "thm2.1") {
    res = c1_embedding(cfg);
  } else if (tag == "jn3.1") {
    res = combine("jn3.1", {c4_cz_generations(cfg), c5_jn_decay(cfg)});
  } else if (tag == "def3.5") {
    res = c2_chain(cfg);
  } else if (tag == "pc1") {
    res = c3_inf_constant(cfg);
  } else if (tag == "jncp") {
    res = jncp_decay(cfg);
  } else if (tag == "jnm1") {
    res = jnm1_exp_integrability(cfg);
  } else if (tag == "jnmalpha") {
    res = jnmalpha_check(cfg);
  } else if (tag == "cmain") {
    res = c9_holder(cfg);
  } else if (tag == "mlip") {
    res = mlip_check(cfg);
  } else if (tag == "jnlip") {
    res = jnlip_check(cfg);
  } else if (tag == "weighted5") {
    res = combine("weighted5", {c10_rubio(cfg), c11_weight_sanity(cfg)});
  } else if (tag == "bilinear6") {
    res = c7_necessity(cfg);
  } else {
    throw std::invalid_argument("unknown check tag: " + tag);
  }
  res.tag = tag;
  res.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::vector<CheckResult> run_suite(const SuiteConfig& cfg) {
  const auto& known = registered_checks();
  for (const std::string& tag : cfg.checks)
    if (std::find(known.begin(), known.end(), tag) == known.end())
      throw std::invalid_argument("unknown check tag: " + tag);
  std::vector<CheckResult> results;
  results.reserve(cfg.checks.size());
  for (const std::string& tag : cfg.checks) results.push_back(run_check(tag, cfg));
  return results;
}

void emit_report(const std::vector<CheckResult>& results, std::ostream& out,
                 FileFormat format, bool include_timings) {
  if (format == FileFormat::Json) {
    ordered_json arr = ordered_json::array();
    for (const CheckResult& r : results) {
      ordered_json j;
      j["tag"] = r.tag;
      j["pass"] = r.pass;
      j["tolerance"] = r.tolerance;
      if (!r.witness.empty()) j["witness"] = r.witness;
      ordered_json m;
      for (const auto& [k, v] : r.measured) m[k] = v;
      j["measured"] = std::move(m);
      if (include_timings) j["runtime_ms"] = r.runtime_ms;
      arr.push_back(std::move(j));
    }
    out << arr.dump(2) << "\n";
    return;
  }
  out << "tag,pass,tolerance,witness,measured\n";
  out.precision(17);
  for (const CheckResult& r : results) {
    out << r.tag << "," << (r.pass ? "1" : "0") << "," << r.tolerance << ",\""
        << r.witness << "\",\"";
    for (std::size_t i = 0; i < r.measured.size(); ++i) {
      if (i) out << ";";
      out << r.measured[i].first << "=" << r.measured[i].second;
    }
    out << "\"";
    if (include_timings) out << "," << r.runtime_ms;
    out << "\n";
  }
}

SuiteConfig suite_config_from_json(const ordered_json& j) {
  SuiteConfig cfg;
  if (j.contains("checks")) cfg.checks = j.at("checks").get<std::vector<std::string>>();
  if (j.contains("res_1d")) cfg.res_1d = j.at("res_1d").get<int>();
  if (j.contains("res_2d")) cfg.res_2d = j.at("res_2d").get<int>();
  if (j.contains("res_maximal")) cfg.res_maximal = j.at("res_maximal").get<int>();
  if (j.contains("res_fine")) cfg.res_fine = j.at("res_fine").get<int>();
  if (j.contains("family")) cfg.family = j.at("family").get<std::string>();
  if (j.contains("p_set")) cfg.p_set = j.at("p_set").get<std::vector<Scalar>>();
  if (j.contains("lambda_set"))
    cfg.lambda_set = j.at("lambda_set").get<std::vector<Scalar>>();
  if (j.contains("alpha_set")) cfg.alpha_set = j.at("alpha_set").get<std::vector<Scalar>>();
  if (j.contains("beta_set")) cfg.beta_set = j.at("beta_set").get<std::vector<Scalar>>();
  if (j.contains("tolerance")) cfg.tolerance = j.at("tolerance").get<Scalar>();
  if (j.contains("identity_tol")) cfg.identity_tol = j.at("identity_tol").get<Scalar>();
  if (j.contains("fit_r2_min")) cfg.fit_r2_min = j.at("fit_r2_min").get<Scalar>();
  if (j.contains("tau")) cfg.tau = j.at("tau").get<Scalar>();
  if (j.contains("depth")) cfg.depth = j.at("depth").get<int>();
  if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
  if (j.contains("maximal_trials"))
    cfg.maximal_trials = j.at("maximal_trials").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
  return cfg;
}

ordered_json to_json(const SuiteConfig& cfg) {
  ordered_json j;
  j["checks"] = cfg.checks;
  j["res_1d"] = cfg.res_1d;
  j["res_2d"] = cfg.res_2d;
  j["res_maximal"] = cfg.res_maximal;
  j["res_fine"] = cfg.res_fine;
  j["family"] = cfg.family;
  j["p_set"] = cfg.p_set;
  j["lambda_set"] = cfg.lambda_set;
  j["alpha_set"] = cfg.alpha_set;
  j["beta_set"] = cfg.beta_set;
  j["tolerance"] = cfg.tolerance;
  j["identity_tol"] = cfg.identity_tol;
  j["fit_r2_min"] = cfg.fit_r2_min;
  j["tau"] = cfg.tau;
  j["depth"] = cfg.depth;
  j["trials"] = cfg.trials;
  j["maximal_trials"] = cfg.maximal_trials;
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir;
  return j;
}

}  // namespace morcam
