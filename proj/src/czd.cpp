#include "morcam/czd.hpp"

#include "morcam/seminorms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace morcam {

namespace {

bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

void require_dyadic_base(const Cube& q0, int n) {
  const int ext = q0.extent(0);
  if (!power_of_two(ext))
    throw std::invalid_argument("cz_decompose: base cube extent must be a power of two");
  if (n == 2 && q0.extent(1) != ext)
    throw std::invalid_argument("cz_decompose: base cube must be square");
}

struct CZContext {
  const Domain* dom;
  const PrefixField* pf;
  Scalar tau;
  std::vector<SelectedCube>* out;
};

void cz_recurse(const CZContext& ctx, std::array<int, 2> lo, std::array<int, 2> hi) {
  const int ext = hi[0] - lo[0] + 1;
  if (ext == 1) return;
  const int half = ext / 2;
  const int n = ctx.dom->dimension();
  const int c1_max = (n == 2) ? 2 : 1;
  for (int c0 = 0; c0 < 2; ++c0)
    for (int c1 = 0; c1 < c1_max; ++c1) {
      std::array<int, 2> clo{lo[0] + c0 * half, n == 2 ? lo[1] + c1 * half : 0};
      std::array<int, 2> chi{clo[0] + half - 1, n == 2 ? clo[1] + half - 1 : 0};
      const Index cnt = ctx.pf->count(clo, chi);
      if (cnt == 0) continue;
      const Scalar avg = ctx.pf->sum(clo, chi) / static_cast<Scalar>(cnt);
      if (avg > ctx.tau) {
        SelectedCube sel;
        sel.cube = make_cube(*ctx.dom, clo, chi);
        sel.average = avg;
        ctx.out->push_back(std::move(sel));
      } else {
        cz_recurse(ctx, clo, chi);
      }
    }
}

}  // namespace

CZDecomposition cz_decompose(const GridFunction& g, const Cube& q0, Scalar tau) {
  const Domain& dom = g.domain();
  require_dyadic_base(q0, dom.dimension());
  if (!(tau > 0)) throw std::invalid_argument("cz_decompose: tau must be > 0");
  if (q0.active_cells == 0)
    throw std::invalid_argument("cz_decompose: base cube misses the active domain");
  for_each_active_cell(dom, q0, [&](Index i) {
    if (g[i] < 0) throw std::invalid_argument("cz_decompose: driving function must be >= 0");
  });
  const Scalar base_avg = cube_mean(g, q0);
  if (base_avg > tau)
    throw std::invalid_argument("cz_decompose: base average already exceeds tau");

  PrefixField pf(dom, g.samples());
  CZDecomposition dec;
  dec.base = q0;
  dec.tau = tau;
  CZContext ctx{&dom, &pf, tau, &dec.selected};
  cz_recurse(ctx, q0.lo, q0.hi);

  dec.good.assign(static_cast<std::size_t>(dom.cell_count()), 0);
  for_each_active_cell(dom, q0, [&](Index i) { dec.good[static_cast<std::size_t>(i)] = 1; });
  for (const SelectedCube& sel : dec.selected) {
    dec.selected_measure += sel.cube.measure;
    for_each_active_cell(dom, sel.cube,
                         [&](Index i) { dec.good[static_cast<std::size_t>(i)] = 0; });
  }
  dec.good_measure = q0.measure - dec.selected_measure;
  return dec;
}

JNGenerations jn_generations(const GridFunction& f, const Cube& q0, Scalar p,
                             Scalar tau, int depth) {
  const Domain& dom = f.domain();
  if (!(p > 0) || p > 1.0)
    throw std::invalid_argument("jn_generations: p must lie in (0, 1]");
  if (!(tau > 1.0)) throw std::invalid_argument("jn_generations: tau must be > 1");
  if (depth < 1) throw std::invalid_argument("jn_generations: depth must be >= 1");
  require_dyadic_base(q0, dom.dimension());

  JNGenerations out;
  out.base = q0;
  out.p = p;
  out.tau = tau;
  out.depth = depth;

  SeminormSpec spec;
  spec.p = p;
  spec.lambda = static_cast<Scalar>(dom.dimension());
  spec.kind = SeminormKind::Barred;
  spec.normalization = Normalization::Volume;
  const CubeFamily dyadic = enumerate_cubes(dom, DyadicPolicy{}, q0);
  const SeminormReport rep = seminorm(f, spec, dyadic);
  out.scale = rep.root;
  if (out.scale == 0.0) {
    out.degenerate = true;  // f nonnegative-constant on every cube of the family
    return out;
  }

  const GridFunction fn(f.domain_ptr(), f.samples() / out.scale);
  PrefixField pabs(dom, fn.samples().abs());

  const auto driving = [&](const Cube& r) {
    const Scalar ref = pabs.sum(r) / static_cast<Scalar>(r.active_cells);
    Array d = Array::Zero(dom.cell_count());
    for_each_active_cell(dom, r, [&](Index i) {
      d[i] = std::pow(std::abs(fn[i] - ref), p);
    });
    return std::pair<GridFunction, Scalar>(GridFunction(f.domain_ptr(), std::move(d)), ref);
  };

  const Scalar ref0 = pabs.sum(q0) / static_cast<Scalar>(q0.active_cells);
  std::vector<SelectedCube> current;
  {
    auto [g, ref] = driving(q0);
    CZDecomposition dec = cz_decompose(g, q0, tau);
    for (SelectedCube& sel : dec.selected) sel.reference =
        pabs.sum(sel.cube) / static_cast<Scalar>(sel.cube.active_cells);
    current = std::move(dec.selected);
  }

  std::vector<std::uint8_t> in_generation(static_cast<std::size_t>(dom.cell_count()), 0);
  for (int gen = 1; gen <= depth; ++gen) {
    Generation g;
    g.cubes = current;
    for (const SelectedCube& sel : g.cubes) g.total_measure += sel.cube.measure;

    std::fill(in_generation.begin(), in_generation.end(), 0);
    for (const SelectedCube& sel : g.cubes)
      for_each_active_cell(dom, sel.cube,
                           [&](Index i) { in_generation[static_cast<std::size_t>(i)] = 1; });
    Scalar off = 0.0;
    for_each_active_cell(dom, q0, [&](Index i) {
      if (!in_generation[static_cast<std::size_t>(i)])
        off = std::max(off, std::pow(std::abs(fn[i] - ref0), p));
    });
    g.off_generation_max = off;
    out.generations.push_back(std::move(g));

    if (gen == depth || current.empty()) break;
    std::vector<SelectedCube> next;
    for (const SelectedCube& sel : current) {
      auto [drv, ref] = driving(sel.cube);
      CZDecomposition dec = cz_decompose(drv, sel.cube, tau);
      for (SelectedCube& child : dec.selected) {
        child.reference =
            pabs.sum(child.cube) / static_cast<Scalar>(child.cube.active_cells);
        next.push_back(std::move(child));
      }
    }
    current = std::move(next);
  }
  return out;
}

DecayProfile distribution(const GridFunction& g, const Cube& region,
                          const std::vector<Scalar>& thresholds) {
  if (region.active_cells == 0)
    throw std::invalid_argument("distribution: region misses the active domain");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0))
      throw std::invalid_argument("distribution: thresholds must be positive");
    if (i > 0 && !(thresholds[i] > thresholds[i - 1]))
      throw std::invalid_argument("distribution: thresholds must be strictly increasing");
  }
  std::vector<Scalar> abs_values;
  abs_values.reserve(static_cast<std::size_t>(region.active_cells));
  for_each_active_cell(g.domain(), region, [&](Index i) {
    abs_values.push_back(std::abs(g[i]));
  });
  std::sort(abs_values.begin(), abs_values.end());
  DecayProfile prof;
  prof.thresholds = thresholds;
  prof.fractions.reserve(thresholds.size());
  const Scalar total = static_cast<Scalar>(abs_values.size());
  for (Scalar t : thresholds) {
    const auto it = std::upper_bound(abs_values.begin(), abs_values.end(), t);
    prof.fractions.push_back(static_cast<Scalar>(abs_values.end() - it) / total);
  }
  return prof;
}

std::vector<Scalar> default_thresholds(const GridFunction& g, const Cube& region,
                                       int count) {
  if (count < 2) throw std::invalid_argument("default_thresholds: count must be >= 2");
  std::vector<Scalar> abs_values;
  for_each_active_cell(g.domain(), region, [&](Index i) {
    const Scalar v = std::abs(g[i]);
    if (v > 0) abs_values.push_back(v);
  });
  if (abs_values.size() < 2)
    throw std::invalid_argument("default_thresholds: no positive samples in region");
  std::sort(abs_values.begin(), abs_values.end());
  const auto quantile = [&](Scalar q) {
    const std::size_t idx = static_cast<std::size_t>(
        std::min<Scalar>(q * (abs_values.size() - 1), abs_values.size() - 1.0));
    return abs_values[idx];
  };
  Scalar lo = quantile(0.50), hi = quantile(0.995);
  if (!(hi > lo)) hi = lo * 2.0;
  std::vector<Scalar> ts(count);
  for (int i = 0; i < count; ++i)
    ts[i] = lo * std::pow(hi / lo, static_cast<Scalar>(i) / (count - 1));
  for (int i = 1; i < count; ++i)
    if (!(ts[i] > ts[i - 1])) ts[i] = std::nextafter(ts[i - 1], 1e300);
  return ts;
}

DecayFit fit_exponential_decay(const DecayProfile& profile, Scalar t_lo, Scalar t_hi) {
  Scalar sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < profile.thresholds.size(); ++i) {
    const Scalar t = profile.thresholds[i];
    const Scalar mu = profile.fractions[i];
    if (t < t_lo || t > t_hi || !(mu > 0)) continue;
    const Scalar y = std::log(mu);
    sx += t;
    sy += y;
    sxx += t * t;
    sxy += t * y;
    ++m;
  }
  if (m < 3)
    throw std::runtime_error("fit_exponential_decay: fewer than 3 positive points in range");
  const Scalar denom = m * sxx - sx * sx;
  Scalar slope = 0.0;
  if (denom != 0.0) slope = (m * sxy - sx * sy) / denom;
  const Scalar intercept = (sy - slope * sx) / m;

  Scalar ss_res = 0, ss_tot = 0;
  const Scalar ybar = sy / m;
  for (std::size_t i = 0; i < profile.thresholds.size(); ++i) {
    const Scalar t = profile.thresholds[i];
    const Scalar mu = profile.fractions[i];
    if (t < t_lo || t > t_hi || !(mu > 0)) continue;
    const Scalar y = std::log(mu);
    const Scalar e = y - (intercept + slope * t);
    ss_res += e * e;
    ss_tot += (y - ybar) * (y - ybar);
  }
  DecayFit fit;
  fit.c1 = std::exp(intercept);
  fit.c2 = -slope;
  fit.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.points = m;
  return fit;
}

bool jn_profile_bound_holds(const DecayProfile& profile, Scalar s, Scalar tau,
                            int window_exp) {
  if (!(s > 0) || !(tau > 1.0)) return false;
  const Scalar unit = std::pow(2.0, window_exp) * tau * s;
  for (std::size_t i = 0; i < profile.thresholds.size(); ++i) {
    const Scalar level = std::floor(profile.thresholds[i] / unit);
    const Scalar bound = std::pow(tau, -level);
    if (profile.fractions[i] > bound + 1e-12) return false;
  }
  return true;
}

}  // namespace morcam
