// Independent reference implementations for the test suite: plain loops and
// long-double accumulation, no prefix sums, no library internals.
#pragma once

#include "morcam/grid.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracles {

using morcam::Cube;
using morcam::Domain;
using morcam::GridFunction;
using morcam::Index;
using morcam::Scalar;

inline std::vector<Index> cells_of(const Domain& dom, const Cube& q) {
  std::vector<Index> out;
  if (dom.dimension() == 1) {
    for (int i = q.lo[0]; i <= q.hi[0]; ++i)
      if (dom.active(i)) out.push_back(i);
  } else {
    for (int i0 = q.lo[0]; i0 <= q.hi[0]; ++i0)
      for (int i1 = q.lo[1]; i1 <= q.hi[1]; ++i1) {
        const Index idx = dom.linear(i0, i1);
        if (dom.active(idx)) out.push_back(idx);
      }
  }
  return out;
}

inline Scalar mean(const GridFunction& f, const Cube& q) {
  long double s = 0.0L;
  const auto cells = cells_of(f.domain(), q);
  for (Index i : cells) s += f[i];
  return static_cast<Scalar>(s / cells.size());
}

inline Scalar abs_mean(const GridFunction& f, const Cube& q) {
  long double s = 0.0L;
  const auto cells = cells_of(f.domain(), q);
  for (Index i : cells) s += std::abs(f[i]);
  return static_cast<Scalar>(s / cells.size());
}

inline Scalar power_mean(const GridFunction& f, const Cube& q, Scalar ref, Scalar p,
                         bool of_abs = false, Scalar sign = -1.0) {
  // mean over the cube of |g + sign*ref|^p with g = f or |f|.
  long double s = 0.0L;
  const auto cells = cells_of(f.domain(), q);
  for (Index i : cells) {
    const Scalar g = of_abs ? std::abs(f[i]) : f[i];
    s += std::pow(std::abs(g + sign * ref), static_cast<long double>(p));
  }
  return static_cast<Scalar>(s / cells.size());
}

// All (start, length) pairs of cell-aligned subcubes of an N-cell segment.
inline long anchored_count_1d(int n_cells) {
  long count = 0;
  for (int len = 1; len <= n_cells; ++len)
    for (int s = 0; s + len - 1 <= n_cells - 1; ++s) ++count;
  return count;
}

inline long anchored_count_2d(int n_cells) {
  long count = 0;
  for (int len = 1; len <= n_cells; ++len) {
    const long pos = n_cells - len + 1;
    count += pos * pos;
  }
  return count;
}

// Dense grid search for the constrained minimizer of sum |f - c|^p.
inline Scalar grid_search_constant(const std::vector<Scalar>& samples, Scalar p,
                                   Scalar lo, Scalar hi, Scalar step) {
  Scalar best_c = lo;
  long double best = -1.0L;
  for (Scalar c = lo; c <= hi + step / 2; c += step) {
    long double s = 0.0L;
    for (Scalar x : samples) s += std::pow(std::abs(x - c), static_cast<long double>(p));
    if (best < 0 || s < best) {
      best = s;
      best_c = c;
    }
  }
  return best_c;
}

inline long double objective(const std::vector<Scalar>& samples, Scalar c, Scalar p) {
  long double s = 0.0L;
  for (Scalar x : samples) s += std::pow(std::abs(x - c), static_cast<long double>(p));
  return s;
}

// All-pairs Holder quotient at cell centers.
inline Scalar holder_all_pairs(const GridFunction& f, Scalar beta) {
  const Domain& dom = f.domain();
  std::vector<Index> cells;
  for (Index i = 0; i < dom.cell_count(); ++i)
    if (dom.active(i)) cells.push_back(i);
  Scalar best = 0.0;
  for (std::size_t a = 0; a < cells.size(); ++a)
    for (std::size_t b = a + 1; b < cells.size(); ++b) {
      const auto ca = dom.coords(cells[a]), cb = dom.coords(cells[b]);
      Scalar d2 = 0.0;
      for (int ax = 0; ax < dom.dimension(); ++ax) {
        const Scalar d = dom.center(ca[ax]) - dom.center(cb[ax]);
        d2 += d * d;
      }
      best = std::max(best, std::abs(f[cells[a]] - f[cells[b]]) /
                                std::pow(std::sqrt(d2), beta));
    }
  return best;
}

// Exhaustive local maximal: direct summation over every subcube containing
// the point.
inline Scalar local_maximal_at(const GridFunction& f, const Cube& q, int x0, int x1,
                               Scalar alpha) {
  const Domain& dom = f.domain();
  const int n = dom.dimension();
  Scalar best = 0.0;
  const auto value = [&](const std::array<int, 2>& lo, const std::array<int, 2>& hi) {
    long double s = 0.0L;
    long cnt = 0;
    if (n == 1) {
      for (int i = lo[0]; i <= hi[0]; ++i)
        if (dom.active(i)) {
          s += std::abs(f[i]);
          ++cnt;
        }
    } else {
      for (int i0 = lo[0]; i0 <= hi[0]; ++i0)
        for (int i1 = lo[1]; i1 <= hi[1]; ++i1) {
          const Index idx = dom.linear(i0, i1);
          if (dom.active(idx)) {
            s += std::abs(f[idx]);
            ++cnt;
          }
        }
    }
    if (cnt == 0) return -1.0;
    const Scalar m = cnt * dom.cell_volume();
    return static_cast<Scalar>(std::pow(m, alpha / n - 1.0) * s * dom.cell_volume());
  };
  if (n == 1) {
    for (int a = q.lo[0]; a <= x0; ++a)
      for (int b = x0; b <= q.hi[0]; ++b)
        best = std::max(best, value({a, 0}, {b, 0}));
  } else {
    const int ext = std::min(q.extent(0), q.extent(1));
    for (int len = 1; len <= ext; ++len)
      for (int a0 = std::max(q.lo[0], x0 - len + 1); a0 <= std::min(x0, q.hi[0] - len + 1);
           ++a0)
        for (int a1 = std::max(q.lo[1], x1 - len + 1);
             a1 <= std::min(x1, q.hi[1] - len + 1); ++a1)
          best = std::max(best, value({a0, a1}, {a0 + len - 1, a1 + len - 1}));
  }
  return best;
}

// Pointwise sup over explicit family cubes containing the cell.
inline Scalar global_maximal_at(const GridFunction& f,
                                const std::vector<Cube>& cubes, Index cell,
                                Scalar alpha) {
  const Domain& dom = f.domain();
  const auto c = dom.coords(cell);
  Scalar best = 0.0;
  for (const Cube& q : cubes) {
    if (!q.contains_cell(c[0], c[1])) continue;
    long double s = 0.0L;
    const auto qc = cells_of(dom, q);
    for (Index i : qc) s += std::abs(f[i]);
    const Scalar m = static_cast<Scalar>(qc.size()) * dom.cell_volume();
    best = std::max(best, static_cast<Scalar>(std::pow(m, alpha / dom.dimension() - 1.0) *
                                              s * dom.cell_volume()));
  }
  return best;
}

// Independent stopping-time recursion (1-D, power-of-two extent).
struct CZCube {
  int lo, hi;
  Scalar average;
};
inline void cz_recurse_1d(const GridFunction& g, int lo, int hi,
                          Scalar tau, std::vector<CZCube>& out) {
  const int ext = hi - lo + 1;
  if (ext == 1) return;
  const int half = ext / 2;
  const int parts[2][2] = {{lo, lo + half - 1}, {lo + half, hi}};
  for (const auto& part : parts) {
    long double s = 0.0L;
    long cnt = 0;
    for (int i = part[0]; i <= part[1]; ++i)
      if (g.domain().active(i)) {
        s += g[i];
        ++cnt;
      }
    if (cnt == 0) continue;
    const Scalar avg = static_cast<Scalar>(s / cnt);
    if (avg > tau)
      out.push_back({part[0], part[1], avg});
    else
      cz_recurse_1d(g, part[0], part[1], tau, out);
  }
}

inline Scalar distribution_fraction(const GridFunction& g, const Cube& region, Scalar t) {
  const auto cells = cells_of(g.domain(), region);
  long over = 0;
  for (Index i : cells)
    if (std::abs(g[i]) > t) ++over;
  return static_cast<Scalar>(over) / static_cast<Scalar>(cells.size());
}

}  // namespace oracles
