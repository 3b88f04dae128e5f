#pragma once

#include <array>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "levyfield/lattice.hpp"

namespace levyfield {

using Coords = std::array<double, kMaxDim>;

inline constexpr double kInvFourPi = 0.0795774715459476678844;

/// Pointwise exponential envelope |f(x)| <= constant * exp(-rate ||x||),
/// valid for ||x|| >= from_radius (Euclidean norm).
struct DecayBound {
  double constant = 1.0;
  double rate = 1.0;
  double from_radius = 0.0;
};

/// Half-open axis-aligned box [lo, hi) in R^d; components may be infinite.
struct SupportBox {
  Coords lo{};
  Coords hi{};

  static SupportBox unbounded();
  bool bounded(int dim) const noexcept;
  bool contains(std::span<const double> x) const noexcept;
};

/// Kernel f: R^d -> R with support, decay and singularity metadata.
///
/// Kernels are immutable values sharing their evaluator; the transformations
/// (shift, reflect, truncate, scale, abs) return new kernels and keep the
/// metadata consistent. A kernel may have isolated integrable singularities;
/// quadrature cells whose closure contains one use the cell average instead of
/// the midpoint value.
class Kernel {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;
  /// Average of f over the cube [lower, lower + edge)^d.
  using CellAverage = std::function<double(std::span<const double> lower, double edge)>;

  struct Singularity {
    Coords point{};
    CellAverage cell_average;  // may be empty
  };

  Kernel(int dim, Evaluator f, std::string name);

  Kernel& set_support(const SupportBox& box);
  Kernel& set_decay(const DecayBound& bound);
  Kernel& add_singularity(Singularity s);

  int dim() const noexcept { return dim_; }
  const std::string& name() const noexcept { return name_; }
  const SupportBox& support() const noexcept { return support_; }
  bool bounded_support() const noexcept { return support_.bounded(dim_); }
  /// Smallest r with support inside [-r, r)^d; infinity if unbounded.
  double support_radius() const noexcept;
  const std::optional<DecayBound>& decay() const noexcept { return decay_; }
  const std::vector<Singularity>& singularities() const noexcept { return singular_; }
  bool singular_at_origin() const noexcept;

  /// f(x); throws DomainError at a singular point.
  double operator()(std::span<const double> x) const;
  double operator()(std::initializer_list<double> x) const;

  /// Quadrature value of f on the cell [lower, lower + edge)^d: the
  /// midpoint value, or the cell average when a singularity lies in the
  /// closed cell (midpoint moved edge/4 off the singularity if no average is
  /// known).
  double cell_value(std::span<const double> lower, double edge) const;
  /// cell_value / scale(); lets linear maps apply the scale after summing.
  double unscaled_cell_value(std::span<const double> lower, double edge) const;
  /// Accumulated factor from scaled(); 1 for unscaled kernels.
  double scale() const noexcept { return scale_; }

  /// f * 1_{[-h, h)^d}.
  Kernel truncated(double h) const;
  /// x -> f(x - a).
  Kernel shifted(std::span<const double> a) const;
  Kernel shifted(const LatticePoint& a) const;
  /// x -> f(-x).
  Kernel reflected() const;
  Kernel scaled(double alpha) const;
  Kernel absolute() const;

 private:
  int dim_;
  Evaluator f_;
  std::string name_;
  SupportBox support_ = SupportBox::unbounded();
  std::optional<DecayBound> decay_;
  std::vector<Singularity> singular_;
  double scale_ = 1.0;
};

/// Indicator of the box [lo, hi).
Kernel indicator_kernel(std::span<const double> lo, std::span<const double> hi);
/// 1_{[0,1)^d}.
Kernel box_kernel(int dim);
/// exp(-rate ||x||).
Kernel exp_kernel(int dim, double rate = 1.0);
/// exp(-||x||^2 / (2 scale^2)).
Kernel gauss_kernel(int dim, double scale = 1.0);
/// c * exp(-sqrt(mu) ||x||) / ||x|| in d = 3. The default prefactor 1/(4 pi)
/// is the Green kernel of (mu - Laplace) and integrates to 1/mu.
Kernel green3d(double mu, double prefactor = kInvFourPi);
Kernel zero_kernel(int dim);

/// Integral of exp(-k r)/r over the box [0,a] x [0,b] x [0,c] (corner at the
/// singularity), by decomposition into three pyramids with Gauss-Legendre
/// quadrature over their bases.
double yukawa_corner_box_integral(double a, double b, double c, double k);

/// Average of exp(-k r)/r over the cube [lower, lower + edge)^3.
double yukawa_cell_average(std::span<const double> lower, double edge, double k);

}  // namespace levyfield
