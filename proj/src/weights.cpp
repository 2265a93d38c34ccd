#include "morcam/weights.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace morcam {

Weight::Weight(GridFunction values) : values_(std::move(values)) {
  const Domain& dom = values_.domain();
  for (Index i = 0; i < dom.cell_count(); ++i)
    if (dom.active(i) && !(values_[i] > 0))
      throw std::invalid_argument("Weight: samples must be strictly positive");
}

namespace {

Scalar cube_min(const GridFunction& f, const Cube& q) {
  Scalar m = std::numeric_limits<Scalar>::infinity();
  for_each_active_cell(f.domain(), q, [&](Index i) { m = std::min(m, f[i]); });
  return m;
}

}  // namespace

WeightReport muckenhoupt_constant(const Weight& w, const WeightClass& cls,
                                  const CubeFamily& family) {
  if (family.empty())
    throw std::invalid_argument("muckenhoupt_constant: empty family");
  const GridFunction& omega = w.values();
  const Domain& dom = omega.domain();

  WeightReport rep;
  auto track = [&](std::size_t k, Scalar value) {
    if (rep.arg_cube < 0 || value > rep.constant) {
      rep.constant = value;
      rep.arg_cube = static_cast<std::ptrdiff_t>(k);
      rep.achieving = family.cubes[k];
    }
  };

  if (std::holds_alternative<A1Tag>(cls)) {
    rep.class_tag = "A1";
    rep.p = 1.0;
    PrefixField pw(dom, omega.samples());
    for (std::size_t k = 0; k < family.cubes.size(); ++k) {
      const Cube& q = family.cubes[k];
      const Scalar avg = pw.sum(q) / static_cast<Scalar>(q.active_cells);
      track(k, avg / cube_min(omega, q));
    }
  } else if (std::holds_alternative<ApTag>(cls)) {
    const Scalar p = std::get<ApTag>(cls).p;
    if (!(p > 1.0)) throw std::invalid_argument("muckenhoupt_constant: Ap needs p > 1");
    rep.class_tag = "Ap";
    rep.p = p;
    PrefixField pw(dom, omega.samples());
    PrefixField pr(dom, omega.samples().pow(-1.0 / (p - 1.0)));
    for (std::size_t k = 0; k < family.cubes.size(); ++k) {
      const Cube& q = family.cubes[k];
      const Scalar count = static_cast<Scalar>(q.active_cells);
      const Scalar avg = pw.sum(q) / count;
      const Scalar rec = pr.sum(q) / count;
      track(k, avg * std::pow(rec, p - 1.0));
    }
  } else {
    const auto& tag = std::get<ApqTag>(cls);
    const Scalar p = tag.p, q_exp = tag.q;
    if (!(p >= 1.0) || !(q_exp >= p))
      throw std::invalid_argument("muckenhoupt_constant: Apq needs 1 <= p <= q");
    rep.class_tag = "Apq";
    rep.p = p;
    rep.q = q_exp;
    PrefixField pq(dom, omega.samples().pow(q_exp));
    std::optional<PrefixField> pp;
    if (p > 1.0) {
      const Scalar pprime = p / (p - 1.0);
      pp.emplace(dom, omega.samples().pow(-pprime));
    }
    for (std::size_t k = 0; k < family.cubes.size(); ++k) {
      const Cube& q = family.cubes[k];
      const Scalar count = static_cast<Scalar>(q.active_cells);
      const Scalar first = std::pow(pq.sum(q) / count, 1.0 / q_exp);
      Scalar second;
      if (p > 1.0) {
        const Scalar pprime = p / (p - 1.0);
        second = std::pow(pp->sum(q) / count, 1.0 / pprime);
      } else {
        second = 1.0 / cube_min(omega, q);  // p' = inf
      }
      track(k, first * second);
    }
  }
  return rep;
}

std::optional<Scalar> reverse_holder_exponent(const Weight& w, const CubeFamily& family,
                                              Scalar C, const std::vector<Scalar>& q_grid) {
  if (!(C >= 1.0)) throw std::invalid_argument("reverse_holder_exponent: C must be >= 1");
  if (family.empty()) throw std::invalid_argument("reverse_holder_exponent: empty family");
  const GridFunction& omega = w.values();
  const Domain& dom = omega.domain();
  PrefixField pw(dom, omega.samples());

  std::optional<Scalar> best;
  for (Scalar q_exp : q_grid) {
    if (!(q_exp > 1.0))
      throw std::invalid_argument("reverse_holder_exponent: grid values must be > 1");
    PrefixField pq(dom, omega.samples().pow(q_exp));
    bool ok = true;
    for (const Cube& q : family.cubes) {
      const Scalar count = static_cast<Scalar>(q.active_cells);
      const Scalar lhs = std::pow(pq.sum(q) / count, 1.0 / q_exp);
      const Scalar rhs = C * (pw.sum(q) / count);
      if (lhs > rhs * (1.0 + 1e-12)) {
        ok = false;
        break;
      }
    }
    if (ok && (!best || q_exp > *best)) best = q_exp;
  }
  return best;
}

namespace {

struct SubsetPair {
  Scalar x;  // |S| / |Q|
  Scalar y;  // w(S) / w(Q)
};

void dyadic_boxes(std::array<int, 2> lo, std::array<int, 2> hi, int n,
                  std::vector<std::pair<std::array<int, 2>, std::array<int, 2>>>& out) {
  const int ext0 = hi[0] - lo[0] + 1;
  if (ext0 <= 1) return;
  const int h0 = ext0 / 2;
  if (n == 1) {
    std::array<std::pair<std::array<int, 2>, std::array<int, 2>>, 2> halves = {
        std::make_pair(lo, std::array<int, 2>{lo[0] + h0 - 1, 0}),
        std::make_pair(std::array<int, 2>{lo[0] + h0, 0}, hi)};
    for (auto& b : halves) {
      out.push_back(b);
      dyadic_boxes(b.first, b.second, n, out);
    }
  } else {
    const int ext1 = hi[1] - lo[1] + 1;
    const int h1 = ext1 / 2;
    if (h1 == 0) return;
    for (int c0 = 0; c0 < 2; ++c0)
      for (int c1 = 0; c1 < 2; ++c1) {
        std::array<int, 2> clo{lo[0] + c0 * h0, lo[1] + c1 * h1};
        std::array<int, 2> chi{c0 == 0 ? lo[0] + h0 - 1 : hi[0],
                               c1 == 0 ? lo[1] + h1 - 1 : hi[1]};
        if (clo[0] > chi[0] || clo[1] > chi[1]) continue;
        out.push_back({clo, chi});
        dyadic_boxes(clo, chi, n, out);
      }
  }
}

std::vector<SubsetPair> sample_pairs(const Weight& w, const CubeFamily& family,
                                     const SubsetPolicy& policy) {
  const GridFunction& omega = w.values();
  const Domain& dom = omega.domain();
  const int n = dom.dimension();
  PrefixField pw(dom, omega.samples());

  std::vector<SubsetPair> pairs;
  for (std::size_t k = 0; k < family.cubes.size(); ++k) {
    const Cube& q = family.cubes[k];
    if (q.active_cells < 2) continue;  // degenerate cubes carry no subsets
    const Scalar q_count = static_cast<Scalar>(q.active_cells);
    const Scalar q_sum = pw.sum(q);

    auto push_box = [&](const std::array<int, 2>& lo, const std::array<int, 2>& hi) {
      const Index cnt = pw.count(lo, hi);
      if (cnt == 0 || cnt == q.active_cells) return;
      pairs.push_back({static_cast<Scalar>(cnt) / q_count, pw.sum(lo, hi) / q_sum});
    };

    if (policy.kind == SubsetPolicyKind::Halves) {
      for (int a = 0; a < n; ++a) {
        const int half = q.extent(a) / 2;
        if (half == 0) continue;
        std::array<int, 2> mid_hi = q.hi, mid_lo = q.lo;
        mid_hi[a] = q.lo[a] + half - 1;
        mid_lo[a] = q.lo[a] + half;
        push_box(q.lo, mid_hi);
        push_box(mid_lo, q.hi);
      }
      continue;
    }

    std::vector<std::pair<std::array<int, 2>, std::array<int, 2>>> boxes;
    dyadic_boxes(q.lo, q.hi, n, boxes);
    for (const auto& b : boxes) push_box(b.first, b.second);

    if (policy.kind == SubsetPolicyKind::DyadicPlusRandom) {
      std::vector<Index> cells;
      cells.reserve(static_cast<std::size_t>(q.active_cells));
      for_each_active_cell(dom, q, [&](Index i) { cells.push_back(i); });
      std::mt19937_64 rng(policy.seed ^ (0x9E3779B97F4A7C15ULL * (k + 1)));
      for (int r = 0; r < policy.random_count; ++r) {
        const std::size_t size =
            1 + static_cast<std::size_t>(rng() % (cells.size() - 1));
        // Partial Fisher-Yates over a working copy.
        std::vector<Index> pool = cells;
        Scalar s_sum = 0.0;
        for (std::size_t j = 0; j < size; ++j) {
          const std::size_t pick = j + static_cast<std::size_t>(rng() % (pool.size() - j));
          std::swap(pool[j], pool[pick]);
          s_sum += omega[pool[j]];
        }
        pairs.push_back({static_cast<Scalar>(size) / q_count, s_sum / q_sum});
      }
    }
  }
  return pairs;
}

}  // namespace

ComparisonFit measure_comparison_exponents(const Weight& w, const CubeFamily& family,
                                           const SubsetPolicy& policy) {
  const std::vector<SubsetPair> pairs = sample_pairs(w, family, policy);
  if (pairs.empty())
    throw std::invalid_argument("measure_comparison_exponents: no usable subset pairs");
  Scalar suu = 0, suv = 0;
  Scalar rmin = std::numeric_limits<Scalar>::infinity();
  Scalar rmax = -std::numeric_limits<Scalar>::infinity();
  std::vector<std::pair<Scalar, Scalar>> logs;
  logs.reserve(pairs.size());
  for (const SubsetPair& pr : pairs) {
    const Scalar u = std::log(pr.x), v = std::log(pr.y);
    logs.push_back({u, v});
    suu += u * u;
    suv += u * v;
    const Scalar r = v / u;  // u < 0 by construction
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  const Scalar slope = suu == 0.0 ? 1.0 : suv / suu;
  Scalar mse = 0.0;
  for (const auto& [u, v] : logs) {
    const Scalar e = v - slope * u;
    mse += e * e;
  }
  mse /= static_cast<Scalar>(logs.size());
  ComparisonFit fit;
  fit.epsilon = rmin;
  fit.L = rmax;
  fit.C = std::exp(2.0 * std::sqrt(mse));
  fit.pairs = static_cast<Index>(pairs.size());
  return fit;
}

bool comparison_fit_holds(const ComparisonFit& fit, const Weight& w,
                          const CubeFamily& family, const SubsetPolicy& policy,
                          Scalar tolerance) {
  const std::vector<SubsetPair> pairs = sample_pairs(w, family, policy);
  for (const SubsetPair& pr : pairs) {
    if (std::pow(pr.x, fit.L) > fit.C * pr.y * (1.0 + tolerance)) return false;
    if (pr.y > fit.C * std::pow(pr.x, fit.epsilon) * (1.0 + tolerance)) return false;
  }
  return true;
}

RubioWeight rubio_de_francia(const GridFunction& g, Scalar B, int K,
                             const CubeFamily& family) {
  if (K < 1) throw std::invalid_argument("rubio_de_francia: K must be >= 1");
  const Scalar g_sup = g.samples().abs().maxCoeff();
  if (!(g_sup > 0)) throw std::invalid_argument("rubio_de_francia: g vanishes identically");

  GridFunction current(g.domain_ptr(), g.samples().abs());
  const GridFunction mg = global_maximal(current, family, 0.0);
  const Scalar ratio = mg.samples().maxCoeff() / g_sup;
  if (B < ratio * (1.0 - 1e-12))
    throw std::invalid_argument(
        "rubio_de_francia: B is below the measured single-step ratio");

  Array sum = current.samples();
  Scalar weight_k = 1.0;
  for (int k = 1; k <= K; ++k) {
    current = global_maximal(current, family, 0.0);
    weight_k /= 2.0 * B;
    sum += weight_k * current.samples();
  }
  RubioWeight out{Weight(GridFunction(g.domain_ptr(), std::move(sum))),
                  2.0 * current.samples().maxCoeff() * weight_k, ratio, B, K};
  return out;
}

CharStatistic weighted_char_statistic(const GridFunction& b, const Weight& w, Scalar p,
                                      Scalar q, Scalar alpha, const CubeFamily& family) {
  require_same_domain(b, w.values());
  const Domain& dom = b.domain();
  const int n = dom.dimension();
  if (!(p >= 1.0) || !(q >= p))
    throw std::invalid_argument("weighted_char_statistic: needs 1 <= p <= q");
  if (std::abs(1.0 / p - 1.0 / q - alpha / n) > 1e-12)
    throw std::invalid_argument(
        "weighted_char_statistic: exponent relation 1/p - 1/q = alpha/n violated");
  if (family.empty())
    throw std::invalid_argument("weighted_char_statistic: empty family");

  const GridFunction& omega = w.values();
  const Scalar cellvol = dom.cell_volume();
  PrefixField pwp(dom, omega.samples().pow(p));

  CharStatistic st;
  st.p = p;
  st.q = q;
  st.alpha = alpha;

  for (std::size_t k = 0; k < family.cubes.size(); ++k) {
    const Cube& cube = family.cubes[k];
    st.exact = st.exact && competitor_set_exact(cube);
    const GridFunction loc = local_maximal(b, cube, alpha);
    const Scalar norm = alpha == 0.0 ? 1.0 : std::pow(cube.measure, -alpha / n);
    Scalar num = 0.0;
    for_each_active_cell(dom, cube, [&](Index i) {
      num += std::pow(std::abs(b[i] - norm * loc[i]), q) * std::pow(omega[i], q);
    });
    const Scalar numerator = std::pow(num * cellvol, 1.0 / q);
    const Scalar denominator = std::pow(pwp.sum(cube) * cellvol, 1.0 / p);
    const Scalar value =
        std::pow(cube.measure, alpha / n) * numerator / denominator;
    if (st.arg_cube < 0 || value > st.sup) {
      st.sup = value;
      st.arg_cube = static_cast<std::ptrdiff_t>(k);
      st.achieving = cube;
    }
  }
  return st;
}

}  // namespace morcam
