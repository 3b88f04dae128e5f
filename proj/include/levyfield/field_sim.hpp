#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "levyfield/kernels.hpp"
#include "levyfield/lattice.hpp"
#include "levyfield/levy_basis.hpp"
#include "levyfield/quadrature.hpp"
#include "levyfield/random.hpp"

namespace levyfield {

inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{2} << 30;

/// Realised increments L(cell) on the cells of edge delta covering the
/// window [-W, W)^d. Cell c (cell coordinates) is [c delta, (c + 1) delta).
///
/// The increment of a cell is `constant + gaussian[c] + sum of jumps at c`.
/// Jumps are stored sparsely: for each atom, a Poisson(mass |window|) number
/// of jumps placed in uniformly chosen cells, which gives independent
/// Poisson(mass delta^d) counts per cell.
struct NoiseGrid {
  struct Jump {
    std::size_t cell;  ///< flat index in cells()
    double size;
  };

  int dim = 1;
  int cells_per_unit = 1;
  std::int64_t window_halfwidth = 1;
  double constant = 0.0;
  std::vector<double> gaussian;  ///< dense over cells(); empty without a Gaussian part
  std::vector<Jump> jumps;       ///< sorted by cell

  double resolution() const noexcept { return 1.0 / cells_per_unit; }
  LatticeBox cells() const { return LatticeBox::centered(window_halfwidth * cells_per_unit, dim); }
  double increment(const LatticePoint& cell) const;
  /// All increments in flat (lexicographic) order.
  std::vector<double> dense() const;
};

/// Expected memory footprint of a noise grid, in bytes.
std::size_t noise_grid_bytes(const LevyTriplet& triplet, int dim, std::int64_t window_halfwidth,
                             double resolution);

NoiseGrid build_noise_grid(const LevyTriplet& triplet, int dim, std::int64_t window_halfwidth,
                           double resolution, RngStream& stream,
                           std::size_t memory_budget = kDefaultMemoryBudget);

/// Values of X on a finite point set, points in lexicographic order.
class FieldSample {
 public:
  FieldSample() = default;
  FieldSample(std::vector<LatticePoint> points, std::vector<double> values);

  std::size_t size() const noexcept { return points_.size(); }
  std::span<const LatticePoint> points() const noexcept { return points_; }
  std::span<const double> values() const noexcept { return values_; }
  bool contains(const LatticePoint& p) const noexcept { return index_.contains(p); }
  /// Throws CoverageError if p is absent.
  double value(const LatticePoint& p) const;
  std::optional<double> find(const LatticePoint& p) const noexcept;

 private:
  std::vector<LatticePoint> points_;
  std::vector<double> values_;
  LatticeIndex index_;
};

/// Discrete convolution X_t = sum_c f(t - u_c) L(c) for the truncated kernel
/// f 1_{[-h,h)^d}, u_c the cell midpoint.
///
/// With c = j k + s (k = 1/delta, s in [0, k)^d) the argument cell of
/// t - u_c is (t - j - 1) k + (k - 1 - s), so the kernel is tabulated per
/// sub-offset s against the integer offset m = t - j.
class ConvolutionPlan {
 public:
  ConvolutionPlan(const Kernel& f, const QuadratureSpec& quad,
                  std::size_t memory_budget = kDefaultMemoryBudget);

  int dim() const noexcept { return offsets_.dim(); }
  int cells_per_unit() const noexcept { return k_; }
  /// Integer offsets m with a (possibly) nonzero table entry.
  const LatticeBox& offsets() const noexcept { return offsets_; }
  /// Bound on int f^2 outside the window [-h, h)^d (0 if the support fits,
  /// +inf without a decay certificate).
  double tail_bound() const noexcept { return tail_bound_; }
  /// Sum of all cell values times delta^d, i.e. the quadrature of int f.
  double kernel_integral() const noexcept;

  /// Smallest W such that every point's kernel reach lies in [-W, W)^d.
  std::int64_t required_window(std::span<const LatticePoint> points) const;

  /// Values at `points` (any order; returned in the same order). Throws
  /// BoundaryError naming the first point whose reach leaves the grid.
  std::vector<double> apply(std::span<const LatticePoint> points, const NoiseGrid& grid) const;

  double table(std::size_t suboffset, const LatticePoint& m) const;

 private:
  int k_ = 1;
  double scale_ = 1.0;
  double cell_volume_ = 1.0;
  double total_ = 0.0;
  double tail_bound_ = 0.0;
  LatticeBox offsets_;
  LatticeBox suboffsets_;
  std::vector<double> table_;  // [suboffset][offset], unscaled
};

/// Convolve the kernel with the grid at the given points.
FieldSample convolve_at(std::span<const LatticePoint> points, const Kernel& kernel, const NoiseGrid& grid,
                        const QuadratureSpec& quad);

/// Every point needed to evaluate the lag products: points ∪ (points + lag).
std::vector<LatticePoint> lagged_cover(std::span<const LatticePoint> points, std::span<const LatticePoint> lags);

/// Reusable simulator: the plan and target set are built once; run() draws a
/// fresh noise grid from the given stream and convolves.
class Simulator {
 public:
  Simulator(const Kernel& kernel, const LevyTriplet& triplet, std::vector<LatticePoint> points,
            const QuadratureSpec& quad, std::optional<std::int64_t> window_halfwidth = std::nullopt,
            std::size_t memory_budget = kDefaultMemoryBudget);

  const ConvolutionPlan& plan() const noexcept { return plan_; }
  std::span<const LatticePoint> points() const noexcept { return points_; }
  std::int64_t window_halfwidth() const noexcept { return window_; }

  NoiseGrid draw_grid(RngStream& stream) const;
  FieldSample run(RngStream& stream) const;

 private:
  LevyTriplet triplet_;
  QuadratureSpec quad_;
  ConvolutionPlan plan_;
  std::vector<LatticePoint> points_;
  std::int64_t window_ = 1;
  std::size_t memory_budget_;
};

/// One noise grid covering points ∪ (points + lags) plus the kernel reach,
/// convolved at all of them.
FieldSample simulate(const Kernel& kernel, const LevyTriplet& triplet, std::span<const LatticePoint> points,
                     std::span<const LatticePoint> lags, const QuadratureSpec& quad, RngStream& stream);

}  // namespace levyfield
