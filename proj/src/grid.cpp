#include "morcam/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace morcam {

namespace {

bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

Domain::Domain(int dimension, Scalar side, int resolution,
               std::vector<std::uint8_t> mask, Scalar origin)
    : dim_(dimension),
      side_(side),
      res_(resolution),
      origin_(origin),
      mask_(std::move(mask)) {
  if (dim_ != 1 && dim_ != 2)
    throw std::invalid_argument("Domain: dimension must be 1 or 2");
  if (res_ < 1) throw std::invalid_argument("Domain: resolution must be >= 1");
  if (!(side_ > 0)) throw std::invalid_argument("Domain: side must be > 0");
  cell_ = side_ / res_;
  cell_vol_ = std::pow(cell_, dim_);
  cells_ = 1;
  for (int a = 0; a < dim_; ++a) cells_ *= res_;
  if (!mask_.empty() && static_cast<Index>(mask_.size()) != cells_)
    throw std::invalid_argument("Domain: mask size does not match cell count");
  active_ = cells_;
  if (!mask_.empty()) {
    active_ = 0;
    for (auto m : mask_) active_ += (m != 0);
    if (active_ == 0) throw std::invalid_argument("Domain: mask has no active cell");
  }
}

bool Domain::operator==(const Domain& other) const {
  return dim_ == other.dim_ && side_ == other.side_ && res_ == other.res_ &&
         origin_ == other.origin_ && mask_ == other.mask_;
}

GridFunction::GridFunction(DomainPtr domain, Array samples)
    : domain_(std::move(domain)), samples_(std::move(samples)) {
  if (!domain_) throw std::invalid_argument("GridFunction: null domain");
  if (samples_.size() != domain_->cell_count())
    throw std::invalid_argument("GridFunction: sample count does not match cell count");
  for (Index i = 0; i < samples_.size(); ++i) {
    if (!domain_->active(i)) {
      samples_[i] = 0.0;
    } else if (!std::isfinite(samples_[i])) {
      throw std::invalid_argument("GridFunction: non-finite sample at active cell");
    }
  }
}

GridFunction GridFunction::from_active(DomainPtr domain, const Array& active_samples) {
  if (!domain) throw std::invalid_argument("GridFunction: null domain");
  if (active_samples.size() != domain->active_count())
    throw std::invalid_argument("GridFunction: sample count does not match active cell count");
  Array full = Array::Zero(domain->cell_count());
  Index k = 0;
  for (Index i = 0; i < domain->cell_count(); ++i)
    if (domain->active(i)) full[i] = active_samples[k++];
  return GridFunction(std::move(domain), std::move(full));
}

Array GridFunction::active_values() const {
  Array out(domain_->active_count());
  Index k = 0;
  for (Index i = 0; i < samples_.size(); ++i)
    if (domain_->active(i)) out[k++] = samples_[i];
  return out;
}

void require_same_domain(const GridFunction& a, const GridFunction& b) {
  if (a.domain_ptr() == b.domain_ptr()) return;
  if (!(a.domain() == b.domain()))
    throw std::invalid_argument("grid functions live on different domains");
}

Cube make_cube(const Domain& domain, std::array<int, 2> lo, std::array<int, 2> hi) {
  const int n = domain.dimension();
  Cube q;
  q.dim = n;
  int ext0 = hi[0] - lo[0] + 1;
  for (int a = 0; a < n; ++a) {
    if (lo[a] > hi[a]) throw std::invalid_argument("make_cube: empty cell range");
    if (hi[a] - lo[a] + 1 != ext0)
      throw std::invalid_argument("make_cube: cell range is not square");
  }
  q.rho = 0.5 * ext0 * domain.cell_size();
  for (int a = 0; a < n; ++a) {
    q.center[a] = domain.origin() + (lo[a] + 0.5 * ext0) * domain.cell_size();
    q.lo[a] = std::max(lo[a], 0);
    q.hi[a] = std::min(hi[a], domain.resolution() - 1);
    if (q.lo[a] > q.hi[a])
      throw std::invalid_argument("make_cube: cube lies outside the domain");
  }
  if (n == 1) {
    q.lo[1] = q.hi[1] = 0;
    q.center[1] = 0.0;
  }
  if (!domain.masked()) {
    q.active_cells = q.span_cells();
  } else {
    Index count = 0;
    for_each_active_cell(domain, q, [&](Index) { ++count; });
    q.active_cells = count;
  }
  q.measure = static_cast<Scalar>(q.active_cells) * domain.cell_volume();
  return q;
}

Cube centered_cube(const Domain& domain, std::array<int, 2> corner, int radius_cells) {
  if (radius_cells < 1)
    throw std::invalid_argument("centered_cube: radius must be >= 1 cell");
  std::array<int, 2> lo{0, 0}, hi{0, 0};
  for (int a = 0; a < domain.dimension(); ++a) {
    lo[a] = corner[a] - radius_cells;
    hi[a] = corner[a] + radius_cells - 1;
  }
  return make_cube(domain, lo, hi);
}

Cube full_cube(const Domain& domain) {
  std::array<int, 2> lo{0, 0}, hi{0, 0};
  for (int a = 0; a < domain.dimension(); ++a) hi[a] = domain.resolution() - 1;
  return make_cube(domain, lo, hi);
}

namespace {

void canonical_sort(std::vector<Cube>& cubes) {
  std::sort(cubes.begin(), cubes.end(), [](const Cube& a, const Cube& b) {
    const int ea = a.extent(0), eb = b.extent(0);
    if (ea != eb) return ea > eb;
    if (a.lo[0] != b.lo[0]) return a.lo[0] < b.lo[0];
    return a.lo[1] < b.lo[1];
  });
  cubes.erase(std::unique(cubes.begin(), cubes.end(),
                          [](const Cube& a, const Cube& b) { return a.same_cells(b); }),
              cubes.end());
}

void push_if_active(const Domain& domain, std::vector<Cube>& out,
                    std::array<int, 2> lo, std::array<int, 2> hi) {
  Cube q = make_cube(domain, lo, hi);
  if (q.active_cells > 0) out.push_back(std::move(q));
}

void dyadic_recurse(const Domain& domain, std::vector<Cube>& out,
                    std::array<int, 2> lo, std::array<int, 2> hi) {
  Cube q = make_cube(domain, lo, hi);
  if (q.active_cells > 0) out.push_back(q);
  const int ext = hi[0] - lo[0] + 1;
  if (ext == 1) return;
  const int half = ext / 2;
  const int n = domain.dimension();
  if (n == 1) {
    dyadic_recurse(domain, out, {lo[0], 0}, {lo[0] + half - 1, 0});
    dyadic_recurse(domain, out, {lo[0] + half, 0}, {hi[0], 0});
  } else {
    for (int c0 = 0; c0 < 2; ++c0)
      for (int c1 = 0; c1 < 2; ++c1) {
        std::array<int, 2> clo{lo[0] + c0 * half, lo[1] + c1 * half};
        std::array<int, 2> chi{clo[0] + half - 1, clo[1] + half - 1};
        dyadic_recurse(domain, out, clo, chi);
      }
  }
}

}  // namespace

CubeFamily CubeFamily::from_cubes(const Domain& domain, std::vector<Cube> cubes,
                                  std::optional<Cube> base) {
  CubeFamily fam;
  fam.cubes = std::move(cubes);
  fam.base = std::move(base);
  fam.policy_name = "explicit";
  fam.dimension = domain.dimension();
  fam.resolution = domain.resolution();
  return fam;
}

CubeFamily enumerate_cubes(const Domain& domain, const EnumerationPolicy& policy,
                           const std::optional<Cube>& base) {
  if (domain.active_count() == 0)
    throw std::invalid_argument("enumerate_cubes: empty domain");
  std::array<int, 2> blo{0, 0}, bhi{0, 0};
  for (int a = 0; a < domain.dimension(); ++a) bhi[a] = domain.resolution() - 1;
  if (base) {
    blo = base->lo;
    bhi = base->hi;
  }
  const int ext = bhi[0] - blo[0] + 1;
  for (int a = 1; a < domain.dimension(); ++a)
    if (bhi[a] - blo[a] + 1 != ext)
      throw std::invalid_argument("enumerate_cubes: base cube is not square");

  CubeFamily fam;
  fam.base = base;
  fam.dimension = domain.dimension();
  fam.resolution = domain.resolution();

  if (std::holds_alternative<DyadicPolicy>(policy)) {
    if (!power_of_two(ext))
      throw std::invalid_argument("enumerate_cubes: dyadic policy needs a power-of-two extent");
    dyadic_recurse(domain, fam.cubes, blo, bhi);
    fam.policy_name = "dyadic";
  } else if (std::holds_alternative<AnchoredExhaustivePolicy>(policy)) {
    for (int len = ext; len >= 1; --len) {
      if (domain.dimension() == 1) {
        for (int s = blo[0]; s + len - 1 <= bhi[0]; ++s)
          push_if_active(domain, fam.cubes, {s, 0}, {s + len - 1, 0});
      } else {
        for (int s0 = blo[0]; s0 + len - 1 <= bhi[0]; ++s0)
          for (int s1 = blo[1]; s1 + len - 1 <= bhi[1]; ++s1)
            push_if_active(domain, fam.cubes, {s0, s1}, {s0 + len - 1, s1 + len - 1});
      }
    }
    fam.policy_name = "anchored";
  } else {
    const auto& sliding = std::get<SlidingPolicy>(policy);
    if (sliding.stride < 1)
      throw std::invalid_argument("enumerate_cubes: sliding stride must be >= 1");
    if (sliding.scales.empty())
      throw std::invalid_argument("enumerate_cubes: sliding policy needs scales");
    for (int len : sliding.scales) {
      if (len < 1 || len > ext)
        throw std::invalid_argument("enumerate_cubes: scale exceeds base extent");
      if (domain.dimension() == 1) {
        for (int s = blo[0]; s + len - 1 <= bhi[0]; s += sliding.stride)
          push_if_active(domain, fam.cubes, {s, 0}, {s + len - 1, 0});
      } else {
        for (int s0 = blo[0]; s0 + len - 1 <= bhi[0]; s0 += sliding.stride)
          for (int s1 = blo[1]; s1 + len - 1 <= bhi[1]; s1 += sliding.stride)
            push_if_active(domain, fam.cubes, {s0, s1}, {s0 + len - 1, s1 + len - 1});
      }
    }
    fam.policy_name = "sliding";
  }
  canonical_sort(fam.cubes);
  return fam;
}

CubeFamily default_family(const Domain& domain, const std::optional<Cube>& base) {
  int ext = domain.resolution();
  if (base) ext = base->extent(0);
  const bool pow2 = power_of_two(ext);
  if (domain.dimension() == 1) {
    if (ext <= 256) return enumerate_cubes(domain, AnchoredExhaustivePolicy{}, base);
    if (pow2) return enumerate_cubes(domain, DyadicPolicy{}, base);
  } else {
    if (pow2) return enumerate_cubes(domain, DyadicPolicy{}, base);
    if (ext <= 64) return enumerate_cubes(domain, AnchoredExhaustivePolicy{}, base);
  }
  // Irregular large extents: sliding windows at power-of-two scales.
  SlidingPolicy s;
  s.stride = std::max(1, ext / 128);
  for (int len = 1; len <= ext; len *= 2) s.scales.push_back(len);
  if (s.scales.back() != ext) s.scales.push_back(ext);
  return enumerate_cubes(domain, s, base);
}

CubeStats cube_stats(const GridFunction& f, const Cube& q, Scalar p) {
  if (!(p > 0)) throw std::invalid_argument("cube_stats: p must be > 0");
  if (q.active_cells == 0)
    throw std::invalid_argument("cube_stats: cube misses the active domain");
  const Domain& dom = f.domain();
  Scalar sum = 0.0, abs_sum = 0.0;
  for_each_active_cell(dom, q, [&](Index i) {
    sum += f[i];
    abs_sum += std::abs(f[i]);
  });
  const Scalar count = static_cast<Scalar>(q.active_cells);
  CubeStats st;
  st.p = p;
  st.mean = sum / count;
  st.abs_mean = abs_sum / count;
  Scalar o1 = 0, o2 = 0, o3 = 0, o4 = 0, o5 = 0;
  for_each_active_cell(dom, q, [&](Index i) {
    const Scalar v = f[i];
    const Scalar av = std::abs(v);
    o1 += std::pow(std::abs(v - st.mean), p);
    o2 += std::pow(std::abs(v - st.abs_mean), p);
    o3 += std::pow(std::abs(v + st.abs_mean), p);
    o4 += std::pow(std::abs(av - st.mean), p);
    o5 += std::pow(std::abs(av + st.mean), p);
  });
  st.osc_mean = o1 / count;
  st.osc_abs_ref = o2 / count;
  st.osc_abs_ref_plus = o3 / count;
  st.osc_of_abs = o4 / count;
  st.osc_of_abs_plus = o5 / count;
  return st;
}

Scalar measure_condition_constant(const Domain& domain, const CubeFamily& family) {
  if (family.empty())
    throw std::invalid_argument("measure_condition_constant: empty family");
  Scalar a = std::numeric_limits<Scalar>::infinity();
  for (const Cube& q : family.cubes) {
    if (q.active_cells == 0)
      throw std::runtime_error(
          "measure_condition_constant: cube has empty intersection with the domain");
    a = std::min(a, q.measure / std::pow(q.rho, domain.dimension()));
  }
  return a;
}

Extremes extremes(const GridFunction& f) {
  Extremes e;
  const Domain& dom = f.domain();
  for (Index i = 0; i < dom.cell_count(); ++i) {
    if (!dom.active(i)) continue;
    e.pos_sup = std::max(e.pos_sup, f[i]);
    e.neg_sup = std::max(e.neg_sup, -f[i]);
  }
  return e;
}

Scalar integrate(const GridFunction& f, const Cube& q) {
  Scalar sum = 0.0;
  for_each_active_cell(f.domain(), q, [&](Index i) { sum += f[i]; });
  return sum * f.domain().cell_volume();
}

Scalar cube_mean(const GridFunction& f, const Cube& q) {
  if (q.active_cells == 0)
    throw std::invalid_argument("cube_mean: cube misses the active domain");
  Scalar sum = 0.0;
  for_each_active_cell(f.domain(), q, [&](Index i) { sum += f[i]; });
  return sum / static_cast<Scalar>(q.active_cells);
}

PrefixField::PrefixField(const Domain& domain, const Array& values)
    : dim_(domain.dimension()), res_(domain.resolution()) {
  if (values.size() != domain.cell_count())
    throw std::invalid_argument("PrefixField: value count does not match cell count");
  if (dim_ == 1) {
    sum_.assign(res_ + 1, 0.0);
    cnt_.assign(res_ + 1, 0);
    for (int i = 0; i < res_; ++i) {
      const bool act = domain.active(i);
      sum_[i + 1] = sum_[i] + (act ? values[i] : 0.0);
      cnt_[i + 1] = cnt_[i] + (act ? 1 : 0);
    }
  } else {
    const int w = res_ + 1;
    sum_.assign(static_cast<std::size_t>(w) * w, 0.0);
    cnt_.assign(static_cast<std::size_t>(w) * w, 0);
    for (int i0 = 0; i0 < res_; ++i0)
      for (int i1 = 0; i1 < res_; ++i1) {
        const Index idx = domain.linear(i0, i1);
        const bool act = domain.active(idx);
        const std::size_t at = static_cast<std::size_t>(i0 + 1) * w + (i1 + 1);
        sum_[at] = (act ? values[idx] : 0.0) +
                   sum_[at - 1] + sum_[at - w] - sum_[at - w - 1];
        cnt_[at] = (act ? 1 : 0) + cnt_[at - 1] + cnt_[at - w] - cnt_[at - w - 1];
      }
  }
}

Scalar PrefixField::sum(const std::array<int, 2>& lo, const std::array<int, 2>& hi) const {
  if (dim_ == 1) return sum_[hi[0] + 1] - sum_[lo[0]];
  const int w = res_ + 1;
  const auto at = [&](int i0, int i1) { return static_cast<std::size_t>(i0) * w + i1; };
  return sum_[at(hi[0] + 1, hi[1] + 1)] - sum_[at(lo[0], hi[1] + 1)] -
         sum_[at(hi[0] + 1, lo[1])] + sum_[at(lo[0], lo[1])];
}

Index PrefixField::count(const std::array<int, 2>& lo, const std::array<int, 2>& hi) const {
  if (dim_ == 1) return cnt_[hi[0] + 1] - cnt_[lo[0]];
  const int w = res_ + 1;
  const auto at = [&](int i0, int i1) { return static_cast<std::size_t>(i0) * w + i1; };
  return cnt_[at(hi[0] + 1, hi[1] + 1)] - cnt_[at(lo[0], hi[1] + 1)] -
         cnt_[at(hi[0] + 1, lo[1])] + cnt_[at(lo[0], lo[1])];
}

}  // namespace morcam
