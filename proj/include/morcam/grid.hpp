#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace morcam {

using Scalar = double;
using Array = Eigen::ArrayX<Scalar>;
using Index = Eigen::Index;

/// Uniform grid over a square box [origin, origin+side]^n, n = 1 or 2.
/// Cells are the atoms of the discrete measure space; samples live at cell
/// centers and integrals are midpoint sums (sample * cell volume).  An
/// optional boolean mask selects the active subdomain.
class Domain {
 public:
  Domain(int dimension, Scalar side, int resolution,
         std::vector<std::uint8_t> mask = {}, Scalar origin = 0.0);

  int dimension() const { return dim_; }
  Scalar side() const { return side_; }
  int resolution() const { return res_; }
  Scalar origin() const { return origin_; }
  Scalar cell_size() const { return cell_; }
  Scalar cell_volume() const { return cell_vol_; }

  Index cell_count() const { return cells_; }
  Index active_count() const { return active_; }
  bool masked() const { return !mask_.empty(); }
  const std::vector<std::uint8_t>& mask() const { return mask_; }

  bool active(Index linear) const {
    return mask_.empty() || mask_[static_cast<std::size_t>(linear)] != 0;
  }
  Index linear(int i0, int i1 = 0) const {
    return dim_ == 1 ? i0 : static_cast<Index>(i0) * res_ + i1;
  }
  std::array<int, 2> coords(Index linear) const {
    if (dim_ == 1) return {static_cast<int>(linear), 0};
    return {static_cast<int>(linear / res_), static_cast<int>(linear % res_)};
  }
  /// Center coordinate of a cell index along one axis, in real units.
  Scalar center(int index) const { return origin_ + (index + 0.5) * cell_; }

  bool operator==(const Domain& other) const;

 private:
  int dim_;
  Scalar side_;
  int res_;
  Scalar origin_;
  Scalar cell_;
  Scalar cell_vol_;
  Index cells_;
  Index active_;
  std::vector<std::uint8_t> mask_;
};

using DomainPtr = std::shared_ptr<const Domain>;

/// Real-valued samples on a grid, one per cell (row-major).  Samples at
/// masked-off cells are stored as zero and never enter any statistic.
class GridFunction {
 public:
  GridFunction(DomainPtr domain, Array samples);
  /// Build from one sample per *active* cell, in row-major order of the
  /// active cells.
  static GridFunction from_active(DomainPtr domain, const Array& active_samples);

  const Domain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  const Array& samples() const { return samples_; }
  Scalar operator[](Index i) const { return samples_[i]; }
  /// Samples at active cells only, row-major order.
  Array active_values() const;

 private:
  DomainPtr domain_;
  Array samples_;
};

/// Axis-aligned cell-aligned cube.  The generating cell range may overhang
/// the grid: lo/hi store the clipped range while rho and center keep the
/// unclipped geometry (rho^{-lambda} normalizers reference the ambient cube,
/// the measure is the clipped |Q ∩ Ω|).
struct Cube {
  int dim = 1;
  std::array<int, 2> lo{0, 0};
  std::array<int, 2> hi{0, 0};
  std::array<Scalar, 2> center{0.0, 0.0};
  Scalar rho = 0.0;
  Scalar measure = 0.0;
  Index active_cells = 0;

  int extent(int axis) const { return hi[axis] - lo[axis] + 1; }
  /// Clipped cell span (active or not).
  Index span_cells() const {
    Index s = extent(0);
    if (dim == 2) s *= extent(1);
    return s;
  }
  bool contains_cell(int i0, int i1 = 0) const {
    if (i0 < lo[0] || i0 > hi[0]) return false;
    if (dim == 2 && (i1 < lo[1] || i1 > hi[1])) return false;
    return true;
  }
  bool contains(const Cube& other) const {
    for (int a = 0; a < dim; ++a)
      if (other.lo[a] < lo[a] || other.hi[a] > hi[a]) return false;
    return true;
  }
  bool same_cells(const Cube& other) const {
    return dim == other.dim && lo == other.lo && hi == other.hi;
  }
};

/// Cube from inclusive cell ranges; the range must be square and may
/// overhang the grid (it is clipped against it, but must keep at least one
/// cell inside).
Cube make_cube(const Domain& domain, std::array<int, 2> lo, std::array<int, 2> hi);

/// Cube of side 2*radius cells centered on a cell-corner lattice point
/// (corner indices run 0..resolution).  Corner placements at the domain
/// boundary produce genuinely clipped cubes, e.g. the corner quadrant.
Cube centered_cube(const Domain& domain, std::array<int, 2> corner, int radius_cells);

/// Cube covering the whole grid.
Cube full_cube(const Domain& domain);

struct DyadicPolicy {};
struct AnchoredExhaustivePolicy {};
struct SlidingPolicy {
  int stride = 1;
  std::vector<int> scales;
};
using EnumerationPolicy =
    std::variant<DyadicPolicy, AnchoredExhaustivePolicy, SlidingPolicy>;

/// Deterministic, duplicate-free cube list realizing the "sup over all
/// cubes Q ⊂ Q0" index set.  Cubes with no active cell are dropped (they
/// are not Ω(x0, rho) for any x0 in the domain).
struct CubeFamily {
  std::vector<Cube> cubes;
  std::optional<Cube> base;
  std::string policy_name = "explicit";
  int dimension = 1;
  int resolution = 0;

  static CubeFamily from_cubes(const Domain& domain, std::vector<Cube> cubes,
                               std::optional<Cube> base = {});
  bool empty() const { return cubes.empty(); }
  std::size_t size() const { return cubes.size(); }
};

/// Enumerate cubes under a policy, optionally restricted to a base cube.
/// The dyadic policy requires a power-of-two extent and yields the full
/// tree down to single cells.
CubeFamily enumerate_cubes(const Domain& domain, const EnumerationPolicy& policy,
                           const std::optional<Cube>& base = {});

/// Default family: anchored-exhaustive (all cell-aligned subcubes) at desk
/// scale in 1-D, dyadic for 2-D grids and resolutions above 256.
CubeFamily default_family(const Domain& domain, const std::optional<Cube>& base = {});

/// Per-cube averages and p-power oscillation means, over active cells only.
struct CubeStats {
  Scalar p = 1.0;
  Scalar mean = 0.0;          // f_Q
  Scalar abs_mean = 0.0;      // |f|_Q
  Scalar osc_mean = 0.0;      // mean |f - f_Q|^p
  Scalar osc_abs_ref = 0.0;   // mean |f - |f|_Q|^p
  Scalar osc_abs_ref_plus = 0.0;  // mean |f + |f|_Q|^p
  Scalar osc_of_abs = 0.0;        // mean ||f| - f_Q|^p
  Scalar osc_of_abs_plus = 0.0;   // mean ||f| + f_Q|^p
};
CubeStats cube_stats(const GridFunction& f, const Cube& q, Scalar p);

/// min over the family of |Q ∩ Ω| / rho^n.  Throws if some cube misses the
/// active domain entirely (the measure condition fails at that scale).
Scalar measure_condition_constant(const Domain& domain, const CubeFamily& family);

struct Extremes {
  Scalar pos_sup = 0.0;  // sup f+
  Scalar neg_sup = 0.0;  // sup f-
};
Extremes extremes(const GridFunction& f);

/// ∫ f over Q ∩ Ω (midpoint sum) and the corresponding mean.
Scalar integrate(const GridFunction& f, const Cube& q);
Scalar cube_mean(const GridFunction& f, const Cube& q);

/// O(1) masked box sums after O(cells) setup.
class PrefixField {
 public:
  PrefixField(const Domain& domain, const Array& values);

  Scalar sum(const std::array<int, 2>& lo, const std::array<int, 2>& hi) const;
  Index count(const std::array<int, 2>& lo, const std::array<int, 2>& hi) const;
  Scalar sum(const Cube& q) const { return sum(q.lo, q.hi); }
  Index count(const Cube& q) const { return count(q.lo, q.hi); }

 private:
  int dim_;
  int res_;
  std::vector<Scalar> sum_;
  std::vector<Index> cnt_;
};

template <class F>
void for_each_active_cell(const Domain& domain, const Cube& q, F&& fn) {
  if (domain.dimension() == 1) {
    for (int i = q.lo[0]; i <= q.hi[0]; ++i)
      if (domain.active(i)) fn(static_cast<Index>(i));
  } else {
    for (int i0 = q.lo[0]; i0 <= q.hi[0]; ++i0)
      for (int i1 = q.lo[1]; i1 <= q.hi[1]; ++i1) {
        const Index idx = domain.linear(i0, i1);
        if (domain.active(idx)) fn(idx);
      }
  }
}

void require_same_domain(const GridFunction& a, const GridFunction& b);

}  // namespace morcam
