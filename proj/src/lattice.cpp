#include "levyfield/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levyfield {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("lattice dimension must be in [1, " + std::to_string(kMaxDim) +
                                "], got " + std::to_string(dim));
}

}  // namespace

LatticePoint::LatticePoint(int dim) : dim_(dim) { check_dim(dim); }

LatticePoint::LatticePoint(std::initializer_list<std::int64_t> coords)
    : LatticePoint(std::span<const std::int64_t>(coords.begin(), coords.size())) {}

LatticePoint::LatticePoint(std::span<const std::int64_t> coords)
    : dim_(static_cast<int>(coords.size())) {
  check_dim(dim_);
  std::copy(coords.begin(), coords.end(), x_.begin());
}

std::int64_t LatticePoint::linf_norm() const noexcept {
  std::int64_t m = 0;
  for (int i = 0; i < dim_; ++i) m = std::max(m, std::abs(x_[i]));
  return m;
}

double LatticePoint::l2_norm() const noexcept {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += static_cast<double>(x_[i]) * static_cast<double>(x_[i]);
  return std::sqrt(s);
}

bool LatticePoint::is_zero() const noexcept {
  for (int i = 0; i < dim_; ++i)
    if (x_[i] != 0) return false;
  return true;
}

LatticePoint LatticePoint::operator-() const {
  LatticePoint r = *this;
  for (int i = 0; i < dim_; ++i) r.x_[i] = -x_[i];
  return r;
}

LatticePoint& LatticePoint::operator+=(const LatticePoint& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("lattice dimension mismatch");
  for (int i = 0; i < dim_; ++i) x_[i] += o.x_[i];
  return *this;
}

LatticePoint& LatticePoint::operator-=(const LatticePoint& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("lattice dimension mismatch");
  for (int i = 0; i < dim_; ++i) x_[i] -= o.x_[i];
  return *this;
}

bool operator==(const LatticePoint& a, const LatticePoint& b) noexcept {
  if (a.dim_ != b.dim_) return false;
  for (int i = 0; i < a.dim_; ++i)
    if (a.x_[i] != b.x_[i]) return false;
  return true;
}

std::strong_ordering operator<=>(const LatticePoint& a, const LatticePoint& b) noexcept {
  if (a.dim_ != b.dim_) return a.dim_ <=> b.dim_;
  for (int i = 0; i < a.dim_; ++i)
    if (a.x_[i] != b.x_[i]) return a.x_[i] <=> b.x_[i];
  return std::strong_ordering::equal;
}

std::string LatticePoint::to_string() const {
  std::string s = "(";
  for (int i = 0; i < dim_; ++i) {
    if (i) s += ",";
    s += std::to_string(x_[i]);
  }
  return s + ")";
}

LatticeBox::LatticeBox(LatticePoint lo, LatticePoint hi) : lo_(lo), hi_(hi) {
  if (lo.dim() != hi.dim()) throw std::invalid_argument("box corner dimension mismatch");
  for (int i = 0; i < lo.dim(); ++i) hi_[i] = std::max(hi_[i], lo_[i]);
}

LatticeBox LatticeBox::centered(std::int64_t n, int dim) {
  LatticePoint lo(dim), hi(dim);
  for (int i = 0; i < dim; ++i) {
    lo[i] = -n;
    hi[i] = n;
  }
  return {lo, hi};
}

LatticeBox LatticeBox::bounding(std::span<const LatticePoint> points) {
  if (points.empty()) throw std::invalid_argument("bounding box of an empty point set");
  LatticePoint lo = points.front(), hi = points.front();
  for (const auto& p : points)
    for (int i = 0; i < p.dim(); ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  for (int i = 0; i < hi.dim(); ++i) hi[i] += 1;
  return {lo, hi};
}

std::size_t LatticeBox::volume() const noexcept {
  if (lo_.dim() == 0) return 0;
  std::size_t v = 1;
  for (int i = 0; i < lo_.dim(); ++i) v *= static_cast<std::size_t>(hi_[i] - lo_[i]);
  return v;
}

bool LatticeBox::contains(const LatticePoint& p) const noexcept {
  if (p.dim() != lo_.dim()) return false;
  for (int i = 0; i < p.dim(); ++i)
    if (p[i] < lo_[i] || p[i] >= hi_[i]) return false;
  return true;
}

std::size_t LatticeBox::index_of(const LatticePoint& p) const noexcept {
  std::size_t idx = 0;
  for (int i = 0; i < p.dim(); ++i)
    idx = idx * static_cast<std::size_t>(hi_[i] - lo_[i]) + static_cast<std::size_t>(p[i] - lo_[i]);
  return idx;
}

LatticePoint LatticeBox::point_at(std::size_t index) const {
  LatticePoint p(lo_.dim());
  for (int i = lo_.dim() - 1; i >= 0; --i) {
    const auto ext = static_cast<std::size_t>(hi_[i] - lo_[i]);
    p[i] = lo_[i] + static_cast<std::int64_t>(index % ext);
    index /= ext;
  }
  return p;
}

LatticeBox LatticeBox::intersect(const LatticeBox& o) const {
  LatticePoint lo = lo_, hi = hi_;
  for (int i = 0; i < lo.dim(); ++i) {
    lo[i] = std::max(lo[i], o.lo_[i]);
    hi[i] = std::min(hi[i], o.hi_[i]);
  }
  return {lo, hi};
}

LatticeBox LatticeBox::shifted(const LatticePoint& by) const { return {lo_ + by, hi_ + by}; }

std::vector<LatticePoint> LatticeBox::points() const {
  std::vector<LatticePoint> out;
  const std::size_t n = volume();
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(point_at(k));
  return out;
}

LatticeIndex::LatticeIndex(std::span<const LatticePoint> points) {
  if (points.empty()) return;
  box_ = LatticeBox::bounding(points);
  slot_.assign(box_.volume(), npos);
  for (std::size_t k = 0; k < points.size(); ++k) slot_[box_.index_of(points[k])] = k;
}

std::size_t LatticeIndex::find(const LatticePoint& p) const noexcept {
  if (slot_.empty() || !box_.contains(p)) return npos;
  return slot_[box_.index_of(p)];
}

std::vector<LatticePoint> canonical(std::vector<LatticePoint> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

double shell_count(int dim, std::int64_t k) {
  if (k == 0) return 1.0;
  const double a = static_cast<double>(2 * k + 1), b = static_cast<double>(2 * k - 1);
  return std::pow(a, dim) - std::pow(b, dim);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace levyfield
