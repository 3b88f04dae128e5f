#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "levyfield/kernels.hpp"
#include "levyfield/lattice.hpp"

namespace levyfield {

/// Midpoint-rule grid: cells of edge `resolution` (1/resolution a positive
/// integer, so lattice points are cell corners) over the window [-h, h)^d,
/// h = box_halfwidth a positive multiple of the resolution.
struct QuadratureSpec {
  double resolution = 0.0625;
  double box_halfwidth = 16.0;

  void validate() const;
  /// 1 / resolution.
  int cells_per_unit() const;
  /// h / resolution.
  std::int64_t halfwidth_cells() const;
  double cell_volume(int dim) const;
};

struct QuadratureValue {
  double value = 0.0;
  double tail_bound = 0.0;  ///< bound on the mass outside the window; +inf if unknown
};

/// Cell-index box (in units of the resolution) covering support ∩ window.
LatticeBox quadrature_cells(const Kernel& f, const QuadratureSpec& quad);

/// int_{[-h,h)^d} prod_i f_i by the midpoint rule, cells enumerated in
/// lexicographic order with pairwise summation.
QuadratureValue integrate_product(std::span<const Kernel> factors, const QuadratureSpec& quad);

/// int f g.
QuadratureValue inner_product(const Kernel& f, const Kernel& g, const QuadratureSpec& quad);

/// gamma_X(lag) = sigma2 * int f(-u) f(lag - u) du = sigma2 * int f(v) f(v + lag) dv.
double lag_covariance(const Kernel& f, double sigma2, const LatticePoint& lag, const QuadratureSpec& quad);

/// int_{[0,1]^d} F(u)^2 du with F(u) = sum_t |f(u + t)|, the lattice sum
/// truncated where the decay certificate makes the remainder negligible.
QuadratureValue periodization_norm(const Kernel& f, const QuadratureSpec& quad);

/// sum_{||t||_inf <= radius} int |f(-u) f(t - u)| du, lag by lag, each
/// integral taken on the quadrature window.
double lattice_overlap_sum(const Kernel& f, const QuadratureSpec& quad, std::int64_t radius);

/// Smallest lattice radius T such that the decay certificate bounds
/// sum_{||t||_inf > T} sup_{u in [0,1)^d} |f(u + t)| by tol.
std::int64_t certified_lattice_radius(const Kernel& f, double tol);

/// Kernel cell values on the quadrature grid, stored densely over the cell box
/// support ∩ window. Integer-lattice shifts move whole cells, so lag products
/// reduce to shifted array products.
class SampledKernel {
 public:
  SampledKernel(const Kernel& f, const QuadratureSpec& quad);

  int dim() const noexcept { return cells_.dim(); }
  int cells_per_unit() const noexcept { return k_; }
  double cell_volume() const noexcept { return cell_volume_; }
  const LatticeBox& cells() const noexcept { return cells_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Value on cell c (cell coordinates); 0 outside the stored box.
  double at(const LatticePoint& cell) const noexcept;

  SampledKernel absolute() const;
  double integral() const;
  double max_abs() const noexcept;

  /// cell_volume * sum_c prod_i v_i[c + k * shift_i] for integer-lattice shifts.
  static double shifted_product(std::span<const SampledKernel* const> factors,
                                std::span<const LatticePoint> shifts);

  /// int f(u) g(u + lag) du on the grid.
  static double lag_product(const SampledKernel& f, const SampledKernel& g, const LatticePoint& lag);

 private:
  SampledKernel() = default;

  LatticeBox cells_;
  int k_ = 1;
  double cell_volume_ = 1.0;
  std::vector<double> values_;
};

/// Streams the grid values of a boundedly supported kernel grouped by
/// sub-offset s in [0, k)^d: slice_s(j) is the value on cell j k + s, for j in
/// the integer box `offsets`. Integer-lattice shifts act inside one slice.
class SubOffsetSlices {
 public:
  SubOffsetSlices(const Kernel& f, const QuadratureSpec& quad);

  int dim() const noexcept { return cells_.dim(); }
  int cells_per_unit() const noexcept { return k_; }
  double cell_volume() const noexcept { return cell_volume_; }
  const LatticeBox& offsets() const noexcept { return offsets_; }
  /// Number of sub-offsets, k^d.
  std::size_t count() const noexcept { return suboffsets_.volume(); }
  LatticePoint suboffset(std::size_t index) const { return suboffsets_.point_at(index); }

  /// Fill out (size offsets().volume()) with slice number `index`.
  void fill(std::size_t index, std::span<double> out) const;

 private:
  Kernel f_;
  LatticeBox cells_;
  LatticeBox offsets_;
  LatticeBox suboffsets_;
  int k_ = 1;
  double resolution_ = 1.0;
  double cell_volume_ = 1.0;
};

}  // namespace levyfield
