#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace levyfield {

inline constexpr int kMaxDim = 4;

/// A point of Z^d, 1 <= d <= kMaxDim. Ordering is lexicographic, which is
/// the canonical enumeration order used by every reduction in the library.
class LatticePoint {
 public:
  LatticePoint() = default;
  explicit LatticePoint(int dim);
  LatticePoint(std::initializer_list<std::int64_t> coords);
  explicit LatticePoint(std::span<const std::int64_t> coords);

  static LatticePoint zero(int dim) { return LatticePoint(dim); }

  int dim() const noexcept { return dim_; }
  std::int64_t operator[](int i) const { return x_[static_cast<std::size_t>(i)]; }
  std::int64_t& operator[](int i) { return x_[static_cast<std::size_t>(i)]; }

  std::int64_t linf_norm() const noexcept;
  double l2_norm() const noexcept;
  bool is_zero() const noexcept;

  LatticePoint operator-() const;
  LatticePoint& operator+=(const LatticePoint& o);
  LatticePoint& operator-=(const LatticePoint& o);
  friend LatticePoint operator+(LatticePoint a, const LatticePoint& b) { return a += b; }
  friend LatticePoint operator-(LatticePoint a, const LatticePoint& b) { return a -= b; }

  friend bool operator==(const LatticePoint& a, const LatticePoint& b) noexcept;
  friend std::strong_ordering operator<=>(const LatticePoint& a, const LatticePoint& b) noexcept;

  std::string to_string() const;

 private:
  int dim_ = 0;
  std::array<std::int64_t, kMaxDim> x_{};
};

/// Half-open integer box [lo, hi) in Z^d with row-major flat indexing
/// (last axis fastest, so flat order equals lexicographic order).
class LatticeBox {
 public:
  LatticeBox() = default;
  LatticeBox(LatticePoint lo, LatticePoint hi);

  /// [-n, n)^d
  static LatticeBox centered(std::int64_t n, int dim);
  /// Smallest box containing every point; points must be nonempty.
  static LatticeBox bounding(std::span<const LatticePoint> points);

  int dim() const noexcept { return lo_.dim(); }
  const LatticePoint& lo() const noexcept { return lo_; }
  const LatticePoint& hi() const noexcept { return hi_; }
  std::int64_t extent(int axis) const { return hi_[axis] - lo_[axis]; }
  std::size_t volume() const noexcept;
  bool empty() const noexcept { return volume() == 0; }

  bool contains(const LatticePoint& p) const noexcept;
  std::size_t index_of(const LatticePoint& p) const noexcept;
  LatticePoint point_at(std::size_t index) const;

  LatticeBox intersect(const LatticeBox& o) const;
  LatticeBox shifted(const LatticePoint& by) const;

  /// All points in lexicographic order.
  std::vector<LatticePoint> points() const;

 private:
  LatticePoint lo_;
  LatticePoint hi_;
};

/// Membership/position lookup for a finite point set over its bounding box.
class LatticeIndex {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  LatticeIndex() = default;
  explicit LatticeIndex(std::span<const LatticePoint> points);

  /// Position of p in the original list, or npos.
  std::size_t find(const LatticePoint& p) const noexcept;
  bool contains(const LatticePoint& p) const noexcept { return find(p) != npos; }
  const LatticeBox& box() const noexcept { return box_; }

 private:
  LatticeBox box_;
  std::vector<std::size_t> slot_;
};

/// Sorted, duplicate-free copy of points.
std::vector<LatticePoint> canonical(std::vector<LatticePoint> points);

/// Number of points of Z^d with sup-norm exactly k.
double shell_count(int dim, std::int64_t k);

std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept;

}  // namespace levyfield
