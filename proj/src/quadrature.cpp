#include "levyfield/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "levyfield/errors.hpp"
#include "levyfield/numerics.hpp"
#include "levyfield/summation.hpp"

namespace levyfield {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSnap = 1e-9;

Coords cell_lower(const LatticePoint& c, double delta) {
  Coords lo{};
  for (int i = 0; i < c.dim(); ++i) lo[i] = static_cast<double>(c[i]) * delta;
  return lo;
}

// Iterate the rows (all axes but the last) of a box; calls row(first_point, length).
template <typename RowFn>
void for_each_row(const LatticeBox& box, RowFn&& row) {
  if (box.empty()) return;
  const int d = box.dim();
  const std::int64_t len = box.extent(d - 1);
  std::size_t rows = box.volume() / static_cast<std::size_t>(len);
  LatticePoint p = box.lo();
  for (std::size_t r = 0; r < rows; ++r) {
    row(p, len);
    for (int axis = d - 2; axis >= 0; --axis) {
      if (++p[axis] < box.hi()[axis]) break;
      p[axis] = box.lo()[axis];
    }
  }
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(resolution > 0.0) || !std::isfinite(resolution))
    throw std::invalid_argument("quadrature resolution must be > 0");
  const double inv = 1.0 / resolution;
  if (std::abs(inv - std::round(inv)) > kSnap * inv)
    throw std::invalid_argument("1/resolution must be a positive integer, got resolution " +
                                std::to_string(resolution));
  if (!(box_halfwidth > 0.0) || !std::isfinite(box_halfwidth))
    throw std::invalid_argument("box_halfwidth must be > 0");
  const double ratio = box_halfwidth / resolution;
  if (std::abs(ratio - std::round(ratio)) > kSnap * ratio)
    throw std::invalid_argument("box_halfwidth must be an integer multiple of the resolution");
}

int QuadratureSpec::cells_per_unit() const { return static_cast<int>(std::lround(1.0 / resolution)); }

std::int64_t QuadratureSpec::halfwidth_cells() const {
  return static_cast<std::int64_t>(std::llround(box_halfwidth / resolution));
}

double QuadratureSpec::cell_volume(int dim) const { return std::pow(resolution, dim); }

LatticeBox quadrature_cells(const Kernel& f, const QuadratureSpec& quad) {
  quad.validate();
  const int d = f.dim();
  const double k = quad.cells_per_unit();
  LatticeBox window = LatticeBox::centered(quad.halfwidth_cells(), d);
  LatticePoint lo = window.lo(), hi = window.hi();
  for (int i = 0; i < d; ++i) {
    const double slo = f.support().lo[i], shi = f.support().hi[i];
    if (std::isfinite(slo)) lo[i] = std::max(lo[i], static_cast<std::int64_t>(std::floor(slo * k + kSnap)));
    if (std::isfinite(shi)) hi[i] = std::min(hi[i], static_cast<std::int64_t>(std::ceil(shi * k - kSnap)));
  }
  return {lo, hi};
}

QuadratureValue integrate_product(std::span<const Kernel> factors, const QuadratureSpec& quad) {
  quad.validate();
  if (factors.empty()) throw std::invalid_argument("integrate_product needs at least one factor");
  const int d = factors.front().dim();
  for (const auto& f : factors)
    if (f.dim() != d) throw std::invalid_argument("integrate_product: kernel dimensions differ");

  const double delta = quad.resolution;
  LatticeBox cells = quadrature_cells(factors.front(), quad);
  for (const auto& f : factors.subspan(1)) cells = cells.intersect(quadrature_cells(f, quad));

  PairwiseAccumulator acc;
  for_each_row(cells, [&](LatticePoint p, std::int64_t len) {
    for (std::int64_t i = 0; i < len; ++i, ++p[d - 1]) {
      const Coords lo = cell_lower(p, delta);
      const std::span<const double> lower(lo.data(), static_cast<std::size_t>(d));
      double prod = 1.0;
      for (const auto& f : factors) {
        prod *= f.cell_value(lower, delta);
        if (prod == 0.0) break;
      }
      acc.add(prod);
    }
  });

  QuadratureValue out;
  out.value = acc.sum() * quad.cell_volume(d);

  // Mass outside the window.
  SupportBox joint = SupportBox::unbounded();
  for (const auto& f : factors)
    for (int i = 0; i < d; ++i) {
      joint.lo[i] = std::max(joint.lo[i], f.support().lo[i]);
      joint.hi[i] = std::min(joint.hi[i], f.support().hi[i]);
    }
  bool inside = true;
  for (int i = 0; i < d && inside; ++i)
    inside = joint.hi[i] <= joint.lo[i] ||
             (joint.lo[i] >= -quad.box_halfwidth && joint.hi[i] <= quad.box_halfwidth);
  if (inside) {
    out.tail_bound = 0.0;
  } else {
    double constant = 1.0, rate = 0.0, from = 0.0;
    bool certified = true;
    for (const auto& f : factors) {
      if (!f.decay()) {
        certified = false;
        break;
      }
      constant *= f.decay()->constant;
      rate += f.decay()->rate;
      from = std::max(from, f.decay()->from_radius);
    }
    out.tail_bound = (certified && from <= quad.box_halfwidth)
                         ? numerics::radial_exp_tail(d, constant, rate, quad.box_halfwidth)
                         : kInf;
  }
  return out;
}

QuadratureValue inner_product(const Kernel& f, const Kernel& g, const QuadratureSpec& quad) {
  const Kernel pair[] = {f, g};
  return integrate_product(pair, quad);
}

double lag_covariance(const Kernel& f, double sigma2, const LatticePoint& lag, const QuadratureSpec& quad) {
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("sigma2 must be >= 0");
  if (lag.dim() != f.dim()) throw std::invalid_argument("lag dimension mismatch");
  return sigma2 * inner_product(f, f.shifted(-lag), quad).value;
}

std::int64_t certified_lattice_radius(const Kernel& f, double tol) {
  const int d = f.dim();
  if (f.bounded_support()) {
    // Smallest T with every t beyond T missing the support from [0,1)^d.
    double r = 0.0;
    for (int i = 0; i < d; ++i) r = std::max({r, std::abs(f.support().lo[i]), std::abs(f.support().hi[i])});
    return static_cast<std::int64_t>(std::ceil(r)) + 1;
  }
  if (!f.decay()) throw UnsupportedError("kernel '" + f.name() + "' has no decay certificate");
  const auto& b = *f.decay();
  // For u in [0,1)^d and ||t||_inf = k: ||u + t||_2 >= k - 1.
  std::int64_t t = static_cast<std::int64_t>(std::ceil(b.from_radius)) + 1;
  while (b.constant * std::exp(b.rate) * numerics::lattice_exp_tail(d, b.rate, t + 1) > tol) ++t;
  return t;
}

QuadratureValue periodization_norm(const Kernel& f, const QuadratureSpec& quad) {
  quad.validate();
  if (!f.bounded_support() && !f.decay())
    throw UnsupportedError("periodization_norm: kernel '" + f.name() + "' has no decay certificate");
  const int d = f.dim();
  const int k = quad.cells_per_unit();
  const double delta = quad.resolution;
  constexpr double kTol = 1e-13;
  const std::int64_t radius = certified_lattice_radius(f, kTol);

  LatticePoint unit_hi(d), t_lo(d), t_hi(d);
  for (int i = 0; i < d; ++i) {
    unit_hi[i] = k;
    t_lo[i] = -radius;
    t_hi[i] = radius + 1;
  }
  const LatticeBox unit_cells(LatticePoint::zero(d), unit_hi);
  const LatticeBox shifts(t_lo, t_hi);

  PairwiseAccumulator outer;
  for (std::size_t ci = 0; ci < unit_cells.volume(); ++ci) {
    const LatticePoint c = unit_cells.point_at(ci);
    PairwiseAccumulator periodic;
    for (std::size_t ti = 0; ti < shifts.volume(); ++ti) {
      const LatticePoint t = shifts.point_at(ti);
      Coords lo{};
      for (int i = 0; i < d; ++i) lo[i] = static_cast<double>(c[i]) * delta + static_cast<double>(t[i]);
      periodic.add(std::abs(f.cell_value(std::span<const double>(lo.data(), static_cast<std::size_t>(d)), delta)));
    }
    const double F = periodic.sum();
    outer.add(F * F);
  }
  QuadratureValue out;
  out.value = outer.sum() * quad.cell_volume(d);
  if (f.bounded_support()) {
    out.tail_bound = 0.0;
  } else {
    const auto& b = *f.decay();
    const double tau = b.constant * std::exp(b.rate) * numerics::lattice_exp_tail(d, b.rate, radius + 1);
    out.tail_bound = 2.0 * tau * std::sqrt(out.value) + tau * tau;
  }
  return out;
}

double lattice_overlap_sum(const Kernel& f, const QuadratureSpec& quad, std::int64_t radius) {
  const SampledKernel magnitude = SampledKernel(f, quad).absolute();
  const int d = f.dim();
  LatticePoint lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = -radius;
    hi[i] = radius + 1;
  }
  const LatticeBox lags(lo, hi);
  PairwiseAccumulator acc;
  for (std::size_t li = 0; li < lags.volume(); ++li)
    acc.add(SampledKernel::lag_product(magnitude, magnitude, lags.point_at(li)));
  return acc.sum();
}

SampledKernel::SampledKernel(const Kernel& f, const QuadratureSpec& quad)
    : cells_(quadrature_cells(f, quad)),
      k_(quad.cells_per_unit()),
      cell_volume_(quad.cell_volume(f.dim())) {
  const int d = f.dim();
  const double delta = quad.resolution;
  values_.resize(cells_.volume());
  std::size_t idx = 0;
  for_each_row(cells_, [&](LatticePoint p, std::int64_t len) {
    for (std::int64_t i = 0; i < len; ++i, ++p[d - 1]) {
      const Coords lo = cell_lower(p, delta);
      values_[idx++] = f.cell_value(std::span<const double>(lo.data(), static_cast<std::size_t>(d)), delta);
    }
  });
}

double SampledKernel::at(const LatticePoint& cell) const noexcept {
  return cells_.contains(cell) ? values_[cells_.index_of(cell)] : 0.0;
}

SampledKernel SampledKernel::absolute() const {
  SampledKernel out = *this;
  for (double& v : out.values_) v = std::abs(v);
  return out;
}

double SampledKernel::integral() const { return pairwise_sum(values_) * cell_volume_; }

double SampledKernel::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SampledKernel::shifted_product(std::span<const SampledKernel* const> factors,
                                      std::span<const LatticePoint> shifts) {
  if (factors.empty() || factors.size() != shifts.size())
    throw std::invalid_argument("shifted_product: factors and shifts must match");
  const int d = factors.front()->dim();
  const int k = factors.front()->k_;
  std::vector<LatticePoint> cell_shift;
  LatticeBox domain;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const SampledKernel& f = *factors[i];
    if (f.dim() != d || f.k_ != k) throw std::invalid_argument("shifted_product: incompatible grids");
    LatticePoint s = shifts[i];
    for (int a = 0; a < d; ++a) s[a] *= k;
    cell_shift.push_back(s);
    const LatticeBox pulled = f.cells_.shifted(-s);
    domain = (i == 0) ? pulled : domain.intersect(pulled);
  }
  PairwiseAccumulator acc;
  const std::size_t m = factors.size();
  std::vector<const double*> ptr(m);
  for_each_row(domain, [&](const LatticePoint& p, std::int64_t len) {
    for (std::size_t i = 0; i < m; ++i)
      ptr[i] = factors[i]->values_.data() + factors[i]->cells_.index_of(p + cell_shift[i]);
    for (std::int64_t j = 0; j < len; ++j) {
      double prod = ptr[0][j];
      for (std::size_t i = 1; i < m; ++i) prod *= ptr[i][j];
      acc.add(prod);
    }
  });
  return acc.sum() * factors.front()->cell_volume_;
}

double SampledKernel::lag_product(const SampledKernel& f, const SampledKernel& g, const LatticePoint& lag) {
  const SampledKernel* factors[] = {&f, &g};
  const LatticePoint shifts[] = {LatticePoint::zero(lag.dim()), lag};
  return shifted_product(factors, shifts);
}

SubOffsetSlices::SubOffsetSlices(const Kernel& f, const QuadratureSpec& quad)
    : f_(f),
      cells_(quadrature_cells(f, quad)),
      k_(quad.cells_per_unit()),
      resolution_(quad.resolution),
      cell_volume_(quad.cell_volume(f.dim())) {
  const int d = f.dim();
  LatticePoint jlo(d), jhi(d), shi(d);
  for (int i = 0; i < d; ++i) {
    jlo[i] = floor_div(cells_.lo()[i], k_);
    jhi[i] = std::max(jlo[i], floor_div(cells_.hi()[i] - 1, k_) + 1);
    shi[i] = k_;
  }
  offsets_ = LatticeBox(jlo, jhi);
  suboffsets_ = LatticeBox(LatticePoint::zero(d), shi);
}

void SubOffsetSlices::fill(std::size_t index, std::span<double> out) const {
  if (out.size() != offsets_.volume()) throw std::invalid_argument("slice buffer has the wrong size");
  const int d = dim();
  const LatticePoint s = suboffsets_.point_at(index);
  std::size_t idx = 0;
  for_each_row(offsets_, [&](LatticePoint j, std::int64_t len) {
    for (std::int64_t r = 0; r < len; ++r, ++j[d - 1]) {
      LatticePoint c = j;
      for (int a = 0; a < d; ++a) c[a] = j[a] * k_ + s[a];
      double v = 0.0;
      if (cells_.contains(c)) {
        const Coords lo = cell_lower(c, resolution_);
        v = f_.cell_value(std::span<const double>(lo.data(), static_cast<std::size_t>(d)), resolution_);
      }
      out[idx++] = v;
    }
  });
}

}  // namespace levyfield
