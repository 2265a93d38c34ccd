#include "morcam/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace morcam {

namespace {

constexpr Index kExactCompetitorLimit = 4096;

Scalar competitor_value(const PrefixField& pa, const std::array<int, 2>& lo,
                        const std::array<int, 2>& hi, Scalar alpha, int n,
                        Scalar cellvol) {
  const Index cnt = pa.count(lo, hi);
  if (cnt == 0) return -1.0;
  const Scalar s = pa.sum(lo, hi);
  if (alpha == 0.0) return s / static_cast<Scalar>(cnt);
  const Scalar m = static_cast<Scalar>(cnt) * cellvol;
  return std::pow(m, alpha / n - 1.0) * s * cellvol;
}

/// Scales used for the sparse competitor set: halving chain down to 1.
std::vector<int> sparse_scales(int ext) {
  std::vector<int> scales;
  for (int s = ext; s >= 1; s = s / 2) {
    scales.push_back(s);
    if (s == 1) break;
  }
  if (scales.back() != 1) scales.push_back(1);
  return scales;
}

/// Local maximal values at the active cells of q, written into out (a
/// full-domain array).
void local_maximal_into(const GridFunction& f, const PrefixField& pa, const Cube& q,
                        Scalar alpha, Array& out) {
  const Domain& dom = f.domain();
  const int n = dom.dimension();
  const Scalar cellvol = dom.cell_volume();
  const bool exact = competitor_set_exact(q);

  if (n == 1) {
    const int qlo = q.lo[0], qhi = q.hi[0];
    for (int x = qlo; x <= qhi; ++x) {
      if (!dom.active(x)) continue;
      Scalar best = 0.0;
      if (exact) {
        for (int a = qlo; a <= x; ++a)
          for (int b = x; b <= qhi; ++b)
            best = std::max(best, competitor_value(pa, {a, 0}, {b, 0}, alpha, n, cellvol));
      } else {
        for (int len : sparse_scales(q.extent(0))) {
          const int step = std::max(1, len / 2);
          for (int s = qlo; s <= x && s + len - 1 <= qhi; s += step) {
            if (s + len - 1 < x) continue;
            best = std::max(best,
                            competitor_value(pa, {s, 0}, {s + len - 1, 0}, alpha, n, cellvol));
          }
        }
        best = std::max(best, competitor_value(pa, {x, 0}, {x, 0}, alpha, n, cellvol));
      }
      out[x] = best;
    }
    return;
  }

  const int ext = std::min(q.extent(0), q.extent(1));
  for (int x0 = q.lo[0]; x0 <= q.hi[0]; ++x0)
    for (int x1 = q.lo[1]; x1 <= q.hi[1]; ++x1) {
      const Index idx = dom.linear(x0, x1);
      if (!dom.active(idx)) continue;
      Scalar best = 0.0;
      if (exact) {
        for (int len = 1; len <= ext; ++len) {
          const int a0_lo = std::max(q.lo[0], x0 - len + 1);
          const int a0_hi = std::min(x0, q.hi[0] - len + 1);
          const int a1_lo = std::max(q.lo[1], x1 - len + 1);
          const int a1_hi = std::min(x1, q.hi[1] - len + 1);
          for (int a0 = a0_lo; a0 <= a0_hi; ++a0)
            for (int a1 = a1_lo; a1 <= a1_hi; ++a1)
              best = std::max(best, competitor_value(pa, {a0, a1},
                                                     {a0 + len - 1, a1 + len - 1},
                                                     alpha, n, cellvol));
        }
      } else {
        for (int len : sparse_scales(ext)) {
          const int step = std::max(1, len / 2);
          for (int a0 = q.lo[0]; a0 + len - 1 <= q.hi[0]; a0 += step) {
            if (a0 > x0 || a0 + len - 1 < x0) continue;
            for (int a1 = q.lo[1]; a1 + len - 1 <= q.hi[1]; a1 += step) {
              if (a1 > x1 || a1 + len - 1 < x1) continue;
              best = std::max(best, competitor_value(pa, {a0, a1},
                                                     {a0 + len - 1, a1 + len - 1},
                                                     alpha, n, cellvol));
            }
          }
        }
        best = std::max(best, competitor_value(pa, {x0, x1}, {x0, x1}, alpha, n, cellvol));
      }
      out[idx] = best;
    }
}

void check_alpha(Scalar alpha, int n) {
  if (!(alpha >= 0.0) || alpha >= static_cast<Scalar>(n))
    throw std::invalid_argument("maximal: alpha must lie in [0, n)");
}

}  // namespace

bool competitor_set_exact(const Cube& q) { return q.span_cells() <= kExactCompetitorLimit; }

GridFunction local_maximal(const GridFunction& f, const Cube& q, Scalar alpha) {
  const Domain& dom = f.domain();
  check_alpha(alpha, dom.dimension());
  if (q.active_cells == 0)
    throw std::invalid_argument("local_maximal: cube misses the active domain");
  PrefixField pa(dom, f.samples().abs());
  Array out = Array::Zero(dom.cell_count());
  local_maximal_into(f, pa, q, alpha, out);
  return GridFunction(f.domain_ptr(), std::move(out));
}

GridFunction global_maximal(const GridFunction& f, const CubeFamily& family,
                            Scalar alpha) {
  const Domain& dom = f.domain();
  check_alpha(alpha, dom.dimension());
  if (family.empty()) throw std::invalid_argument("global_maximal: empty family");
  const int n = dom.dimension();
  PrefixField pa(dom, f.samples().abs());
  Array out = Array::Zero(dom.cell_count());
  std::vector<std::uint8_t> covered(static_cast<std::size_t>(dom.cell_count()), 0);
  for (const Cube& q : family.cubes) {
    const Scalar avg = pa.sum(q) / static_cast<Scalar>(q.active_cells);
    const Scalar val =
        alpha == 0.0 ? avg : std::pow(q.measure, alpha / n) * avg;
    for_each_active_cell(dom, q, [&](Index i) {
      if (!covered[static_cast<std::size_t>(i)] || val > out[i]) out[i] = val;
      covered[static_cast<std::size_t>(i)] = 1;
    });
  }
  for (Index i = 0; i < dom.cell_count(); ++i)
    if (dom.active(i) && !covered[static_cast<std::size_t>(i)])
      throw std::invalid_argument("global_maximal: family does not cover the domain");
  return GridFunction(f.domain_ptr(), std::move(out));
}

GridFunction bilinear_maximal(const GridFunction& f1, const GridFunction& f2,
                              const CubeFamily& family) {
  require_same_domain(f1, f2);
  if (family.empty()) throw std::invalid_argument("bilinear_maximal: empty family");
  const Domain& dom = f1.domain();
  PrefixField p1(dom, f1.samples().abs());
  PrefixField p2(dom, f2.samples().abs());
  Array out = Array::Zero(dom.cell_count());
  std::vector<std::uint8_t> covered(static_cast<std::size_t>(dom.cell_count()), 0);
  for (const Cube& q : family.cubes) {
    const Scalar count = static_cast<Scalar>(q.active_cells);
    const Scalar val = (p1.sum(q) / count) * (p2.sum(q) / count);
    for_each_active_cell(dom, q, [&](Index i) {
      if (!covered[static_cast<std::size_t>(i)] || val > out[i]) out[i] = val;
      covered[static_cast<std::size_t>(i)] = 1;
    });
  }
  for (Index i = 0; i < dom.cell_count(); ++i)
    if (dom.active(i) && !covered[static_cast<std::size_t>(i)])
      throw std::invalid_argument("bilinear_maximal: family does not cover the domain");
  return GridFunction(f1.domain_ptr(), std::move(out));
}

GridFunction commutator(const GridFunction& b, const GridFunction& f, Scalar alpha,
                        const CubeFamily& family) {
  require_same_domain(b, f);
  const GridFunction mf = global_maximal(f, family, alpha);
  const GridFunction mbf = global_maximal(
      GridFunction(f.domain_ptr(), b.samples() * f.samples()), family, alpha);
  return GridFunction(f.domain_ptr(), b.samples() * mf.samples() - mbf.samples());
}

GridFunction bilinear_commutator(const GridFunction& b1, const GridFunction& b2,
                                 const GridFunction& f1, const GridFunction& f2,
                                 const CubeFamily& family) {
  require_same_domain(b1, b2);
  require_same_domain(b1, f1);
  require_same_domain(f1, f2);
  const GridFunction m = bilinear_maximal(f1, f2, family);
  const GridFunction m1 = bilinear_maximal(
      GridFunction(f1.domain_ptr(), b1.samples() * f1.samples()), f2, family);
  const GridFunction m2 = bilinear_maximal(
      f1, GridFunction(f2.domain_ptr(), b2.samples() * f2.samples()), family);
  return GridFunction(f1.domain_ptr(), (b1.samples() + b2.samples()) * m.samples() -
                                           m1.samples() - m2.samples());
}

CharStatistic char_statistic(const GridFunction& b, const CubeFamily& family,
                             Scalar alpha, Scalar beta, Scalar p, bool keep_per_cube) {
  const Domain& dom = b.domain();
  const int n = dom.dimension();
  check_alpha(alpha, n);
  if (beta < 0) throw std::invalid_argument("char_statistic: beta must be >= 0");
  if (!(p >= 1)) throw std::invalid_argument("char_statistic: p must be >= 1");
  if (family.empty()) throw std::invalid_argument("char_statistic: empty family");

  PrefixField pa(dom, b.samples().abs());
  Array scratch = Array::Zero(dom.cell_count());

  CharStatistic st;
  st.p = p;
  st.q = p;
  st.alpha = alpha;
  st.beta = beta;
  if (keep_per_cube) st.per_cube.reserve(family.size());

  for (std::size_t k = 0; k < family.cubes.size(); ++k) {
    const Cube& q = family.cubes[k];
    st.exact = st.exact && competitor_set_exact(q);
    local_maximal_into(b, pa, q, alpha, scratch);
    const Scalar norm = alpha == 0.0 ? 1.0 : std::pow(q.measure, -alpha / n);
    Scalar s = 0.0;
    for_each_active_cell(dom, q, [&](Index i) {
      s += std::pow(std::abs(b[i] - norm * scratch[i]), p);
    });
    const Scalar mean = s / static_cast<Scalar>(q.active_cells);
    const Scalar value = std::pow(q.measure, -beta) * std::pow(mean, 1.0 / p);
    if (keep_per_cube) st.per_cube.push_back(value);
    if (st.arg_cube < 0 || value > st.sup) {
      st.sup = value;
      st.arg_cube = static_cast<std::ptrdiff_t>(k);
      st.achieving = q;
    }
  }
  return st;
}

CharStatistic exp_char_statistic(const GridFunction& b, const CubeFamily& family,
                                 Scalar alpha, Scalar c) {
  const Domain& dom = b.domain();
  const int n = dom.dimension();
  check_alpha(alpha, n);
  if (!(c > 0)) throw std::invalid_argument("exp_char_statistic: c must be > 0");
  if (family.empty()) throw std::invalid_argument("exp_char_statistic: empty family");

  PrefixField pa(dom, b.samples().abs());
  Array scratch = Array::Zero(dom.cell_count());

  CharStatistic st;
  st.p = c;  // the exponent inside the integrand
  st.q = c;
  st.alpha = alpha;

  for (std::size_t k = 0; k < family.cubes.size(); ++k) {
    const Cube& q = family.cubes[k];
    st.exact = st.exact && competitor_set_exact(q);
    local_maximal_into(b, pa, q, alpha, scratch);
    const Scalar norm = alpha == 0.0 ? 1.0 : std::pow(q.measure, -alpha / n);
    Scalar s = 0.0;
    for_each_active_cell(dom, q, [&](Index i) {
      s += std::expm1(c * std::abs(b[i] - norm * scratch[i]));
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
