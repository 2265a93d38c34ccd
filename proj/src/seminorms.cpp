#include "morcam/seminorms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace morcam {

SeminormSpec bmo_spec(int dimension) {
  SeminormSpec s;
  s.p = 1.0;
  s.lambda = static_cast<Scalar>(dimension);
  s.kind = SeminormKind::Campanato;
  s.normalization = Normalization::Volume;
  return s;
}

namespace {

std::vector<Scalar> collect_active(const GridFunction& f, const Cube& q) {
  std::vector<Scalar> v;
  v.reserve(static_cast<std::size_t>(q.active_cells));
  for_each_active_cell(f.domain(), q, [&](Index i) { v.push_back(f[i]); });
  return v;
}

Scalar objective(const std::vector<Scalar>& v, Scalar c, Scalar p) {
  Scalar s = 0.0;
  for (Scalar x : v) s += std::pow(std::abs(x - c), p);
  return s;
}

Scalar clip(Scalar c, ConstraintSign sign) {
  switch (sign) {
    case ConstraintSign::NonNegative: return std::max(c, 0.0);
    case ConstraintSign::NonPositive: return std::min(c, 0.0);
    case ConstraintSign::Free: return c;
  }
  return c;
}

Scalar minimize_over(const std::vector<Scalar>& v, Scalar p, ConstraintSign sign) {
  if (p == 1.0) {
    std::vector<Scalar> s = v;
    std::sort(s.begin(), s.end());
    const std::size_t n = s.size();
    const Scalar med = (n % 2 == 1) ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
    return clip(med, sign);
  }
  if (p == 2.0) {
    Scalar mean = 0.0;
    for (Scalar x : v) mean += x;
    mean /= static_cast<Scalar>(v.size());
    return clip(mean, sign);
  }
  const auto [mn_it, mx_it] = std::minmax_element(v.begin(), v.end());
  Scalar lo = *mn_it, hi = *mx_it;
  if (sign == ConstraintSign::NonNegative) {
    if (hi <= 0.0) return 0.0;  // objective increasing on [0, inf)
    lo = std::max(lo, 0.0);
  } else if (sign == ConstraintSign::NonPositive) {
    if (lo >= 0.0) return 0.0;
    hi = std::min(hi, 0.0);
  }
  if (lo == hi) return lo;
  if (p < 1.0) {
    // Concave between order statistics: scan samples plus the boundary.
    Scalar best_c = lo, best = std::numeric_limits<Scalar>::infinity();
    auto consider = [&](Scalar c) {
      const Scalar val = objective(v, c, p);
      if (val < best) {
        best = val;
        best_c = c;
      }
    };
    if (sign != ConstraintSign::Free) consider(0.0);
    for (Scalar x : v)
      if (x >= lo && x <= hi) consider(x);
    return best_c;
  }
  // Convex for p > 1: golden-section search on [lo, hi].
  const Scalar gr = 0.5 * (std::sqrt(5.0) - 1.0);
  Scalar a = lo, b = hi;
  Scalar c1 = b - gr * (b - a), c2 = a + gr * (b - a);
  Scalar f1 = objective(v, c1, p), f2 = objective(v, c2, p);
  for (int it = 0; it < 200 && (b - a) > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
    if (f1 <= f2) {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - gr * (b - a);
      f1 = objective(v, c1, p);
    } else {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + gr * (b - a);
      f2 = objective(v, c2, p);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

Scalar minimizing_constant(const GridFunction& f, const Cube& q, Scalar p,
                           ConstraintSign constraint) {
  if (!(p > 0)) throw std::invalid_argument("minimizing_constant: p must be > 0");
  if (q.active_cells == 0)
    throw std::invalid_argument("minimizing_constant: cube misses the active domain");
  const std::vector<Scalar> v = collect_active(f, q);
  return minimize_over(v, p, constraint);
}

SeminormReport seminorm(const GridFunction& f, const SeminormSpec& spec,
                        const CubeFamily& family, bool keep_per_cube) {
  if (!(spec.p > 0)) throw std::invalid_argument("seminorm: p must be > 0");
  if (spec.lambda < 0) throw std::invalid_argument("seminorm: lambda must be >= 0");
  if (family.empty()) throw std::invalid_argument("seminorm: empty cube family");
  const Domain& dom = f.domain();
  const int n = dom.dimension();
  const Scalar p = spec.p;
  const Scalar cellvol = dom.cell_volume();

  PrefixField pf(dom, f.samples());
  PrefixField pa(dom, f.samples().abs());

  SeminormReport rep;
  rep.spec = spec;
  if (keep_per_cube) rep.per_cube.reserve(family.size());

  for (std::size_t k = 0; k < family.cubes.size(); ++k) {
    const Cube& q = family.cubes[k];
    const Scalar count = static_cast<Scalar>(q.active_cells);
    const Scalar mean = pf.sum(q) / count;
    const Scalar abs_mean = pa.sum(q) / count;

    Scalar integral = 0.0;
    switch (spec.kind) {
      case SeminormKind::Morrey: {
        Scalar s = 0.0;
        for_each_active_cell(dom, q, [&](Index i) { s += std::pow(std::abs(f[i]), p); });
        integral = s * cellvol;
        break;
      }
      case SeminormKind::Campanato:
      case SeminormKind::Barred:
      case SeminormKind::Tilde:
      case SeminormKind::AbsMinusMean:
      case SeminormKind::AbsPlusMean: {
        Scalar s = 0.0;
        for_each_active_cell(dom, q, [&](Index i) {
          const Scalar v = f[i];
          Scalar d = 0.0;
          switch (spec.kind) {
            case SeminormKind::Campanato: d = v - mean; break;
            case SeminormKind::Barred: d = v - abs_mean; break;
            case SeminormKind::Tilde: d = v + abs_mean; break;
            case SeminormKind::AbsMinusMean: d = std::abs(v) - mean; break;
            default: d = std::abs(v) + mean; break;
          }
          s += std::pow(std::abs(d), p);
        });
        integral = s * cellvol;
        break;
      }
      case SeminormKind::InfNonneg:
      case SeminormKind::InfNonpos: {
        const ConstraintSign sign = spec.kind == SeminormKind::InfNonneg
                                        ? ConstraintSign::NonNegative
                                        : ConstraintSign::NonPositive;
        const Scalar c = minimizing_constant(f, q, p, sign);
        Scalar s = 0.0;
        for_each_active_cell(dom, q, [&](Index i) { s += std::pow(std::abs(f[i] - c), p); });
        integral = s * cellvol;
        break;
      }
    }

    const Scalar factor = spec.normalization == Normalization::Radius
                              ? std::pow(q.rho, -spec.lambda)
                              : std::pow(q.measure, -spec.lambda / n);
    const Scalar value = factor * integral;
    if (keep_per_cube) rep.per_cube.push_back(value);
    if (rep.arg_cube < 0 || value > rep.sup) {
      rep.sup = value;
      rep.arg_cube = static_cast<std::ptrdiff_t>(k);
      rep.achieving = q;
    }
  }
  rep.root = std::pow(rep.sup, 1.0 / p);
  return rep;
}

HolderReport holder_seminorm(const GridFunction& f, Scalar beta) {
  if (!(beta > 0) || beta > 1.0)
    throw std::invalid_argument("holder_seminorm: beta must be in (0, 1]");
  const Domain& dom = f.domain();
  if (dom.active_count() < 2)
    throw std::invalid_argument("holder_seminorm: needs at least two active cells");

  const int n = dom.dimension();
  const int res = dom.resolution();
  HolderReport rep;
  rep.exact = (n == 1) ? res <= 4096 : res <= 64;

  std::vector<Index> cells;
  cells.reserve(static_cast<std::size_t>(dom.active_count()));
  for (Index i = 0; i < dom.cell_count(); ++i)
    if (dom.active(i)) cells.push_back(i);

  const auto ratio = [&](Index a, Index b) {
    const auto ca = dom.coords(a), cb = dom.coords(b);
    Scalar d2 = 0.0;
    for (int ax = 0; ax < n; ++ax) {
      const Scalar d = dom.center(ca[ax]) - dom.center(cb[ax]);
      d2 += d * d;
    }
    const Scalar dist = std::sqrt(d2);
    return std::abs(f[a] - f[b]) / std::pow(dist, beta);
  };

  if (rep.exact) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      for (std::size_t j = i + 1; j < cells.size(); ++j)
        rep.value = std::max(rep.value, ratio(cells[i], cells[j]));
    return rep;
  }

  // Dyadic-offset restriction: a lower bound of the all-pairs sup.
  std::vector<int> offsets{0};
  for (int d = 1; d < res; d *= 2) offsets.push_back(d);
  for (Index a : cells) {
    const auto ca = dom.coords(a);
    for (int d0 : offsets)
      for (int d1 : (n == 2 ? offsets : std::vector<int>{0})) {
        if (d0 == 0 && d1 == 0) continue;
        const int i0 = ca[0] + d0, i1 = ca[1] + d1;
        if (i0 >= res || (n == 2 && i1 >= res)) continue;
        const Index b = dom.linear(i0, i1);
        if (!dom.active(b)) continue;
        rep.value = std::max(rep.value, ratio(a, b));
      }
  }
  return rep;
}

Scalar variant_equivalence_ratio(const SeminormReport& a, const SeminormReport& b) {
  if (a.root == 0.0 && b.root == 0.0) return 1.0;
  if (b.root == 0.0) return std::numeric_limits<Scalar>::infinity();
  return a.root / b.root;
}

ExpIntegrability exp_integrability(const GridFunction& f, const CubeFamily& family,
                                   Scalar c) {
  if (!(c > 0)) throw std::invalid_argument("exp_integrability: c must be > 0");
  if (family.empty()) throw std::invalid_argument("exp_integrability: empty family");
  const Domain& dom = f.domain();
  PrefixField pa(dom, f.samples().abs());
  ExpIntegrability st;
  st.c = c;
  for (std::size_t k = 0; k < family.cubes.size(); ++k) {
    const Cube& q = family.cubes[k];
    const Scalar ref = pa.sum(q) / static_cast<Scalar>(q.active_cells);
    Scalar s = 0.0;
    for_each_active_cell(dom, q, [&](Index i) {
      s += std::expm1(c * std::abs(f[i] - ref));
    });
    const Scalar value = s / static_cast<Scalar>(q.active_cells);
    if (st.arg_cube < 0 || value > st.sup) {
      st.sup = value;
      st.arg_cube = static_cast<std::ptrdiff_t>(k);
      st.achieving = q;
    }
  }
  return st;
}

}  // namespace morcam
