#include "levyfield/field_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "levyfield/errors.hpp"
#include "levyfield/numerics.hpp"
#include "levyfield/summation.hpp"

namespace levyfield {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t checked_volume(int dim, std::int64_t side) {
  double v = std::pow(static_cast<double>(side), dim);
  if (v > 1e18) throw CapacityError("grid volume overflows", std::numeric_limits<std::size_t>::max());
  return static_cast<std::size_t>(v);
}

}  // namespace

double NoiseGrid::increment(const LatticePoint& cell) const {
  const LatticeBox box = cells();
  if (!box.contains(cell)) throw BoundaryError("cell " + cell.to_string() + " outside the noise window");
  const std::size_t idx = box.index_of(cell);
  double x = constant;
  if (!gaussian.empty()) x += gaussian[idx];
  auto it = std::lower_bound(jumps.begin(), jumps.end(), idx,
                             [](const Jump& j, std::size_t i) { return j.cell < i; });
  for (; it != jumps.end() && it->cell == idx; ++it) x += it->size;
  return x;
}

std::vector<double> NoiseGrid::dense() const {
  std::vector<double> out(cells().volume(), constant);
  if (!gaussian.empty())
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += gaussian[i];
  for (const Jump& j : jumps) out[j.cell] += j.size;
  return out;
}

std::size_t noise_grid_bytes(const LevyTriplet& triplet, int dim, std::int64_t window_halfwidth,
                             double resolution) {
  const auto k = static_cast<std::int64_t>(std::llround(1.0 / resolution));
  const std::size_t cells = checked_volume(dim, 2 * window_halfwidth * k);
  const double volume = std::pow(2.0 * static_cast<double>(window_halfwidth), dim);
  const double expected_jumps = triplet.total_jump_mass() * volume;
  std::size_t bytes = static_cast<std::size_t>((expected_jumps + 6.0 * std::sqrt(expected_jumps) + 16.0) *
                                               sizeof(NoiseGrid::Jump));
  if (triplet.gaussian_var() > 0.0) bytes += cells * sizeof(double);
  return bytes;
}

NoiseGrid build_noise_grid(const LevyTriplet& triplet, int dim, std::int64_t window_halfwidth,
                           double resolution, RngStream& stream, std::size_t memory_budget) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("grid dimension out of range");
  if (window_halfwidth < 1) throw std::invalid_argument("window halfwidth must be >= 1");
  QuadratureSpec{resolution, 1.0}.validate();
  const std::size_t bytes = noise_grid_bytes(triplet, dim, window_halfwidth, resolution);
  if (bytes > memory_budget)
    throw CapacityError("noise grid needs " + std::to_string(bytes) + " bytes, budget " +
                            std::to_string(memory_budget),
                        bytes);

  NoiseGrid g;
  g.dim = dim;
  g.cells_per_unit = static_cast<int>(std::lround(1.0 / resolution));
  g.window_halfwidth = window_halfwidth;
  const double cell_volume = std::pow(resolution, dim);
  g.constant = deterministic_rate(triplet) * cell_volume;
  const std::size_t ncells = g.cells().volume();

  if (triplet.gaussian_var() > 0.0) {
    std::normal_distribution<double> normal(0.0, std::sqrt(triplet.gaussian_var() * cell_volume));
    g.gaussian.resize(ncells);
    for (double& x : g.gaussian) x = normal(stream);
  }
  const double window_volume = std::pow(2.0 * static_cast<double>(window_halfwidth), dim);
  std::uniform_int_distribution<std::size_t> pick(0, ncells - 1);
  for (const JumpAtom& atom : triplet.jumps()) {
    std::poisson_distribution<std::int64_t> count(atom.mass * window_volume);
    const std::int64_t n = count(stream);
    for (std::int64_t i = 0; i < n; ++i) g.jumps.push_back({pick(stream), atom.size});
  }
  std::stable_sort(g.jumps.begin(), g.jumps.end(),
                   [](const NoiseGrid::Jump& a, const NoiseGrid::Jump& b) { return a.cell < b.cell; });
  return g;
}

FieldSample::FieldSample(std::vector<LatticePoint> points, std::vector<double> values) {
  if (points.size() != values.size()) throw std::invalid_argument("field sample: points and values differ in length");
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  points_.reserve(points.size());
  values_.reserve(points.size());
  for (std::size_t i : order) {
    if (!points_.empty() && points_.back() == points[i])
      throw std::invalid_argument("field sample: duplicate point " + points[i].to_string());
    if (!std::isfinite(values[i])) throw std::invalid_argument("field sample: non-finite value at " + points[i].to_string());
    points_.push_back(points[i]);
    values_.push_back(values[i]);
  }
  if (!points_.empty()) index_ = LatticeIndex(points_);
}

double FieldSample::value(const LatticePoint& p) const {
  const std::size_t i = index_.find(p);
  if (i == LatticeIndex::npos) throw CoverageError("field sample has no value at " + p.to_string());
  return values_[i];
}

std::optional<double> FieldSample::find(const LatticePoint& p) const noexcept {
  const std::size_t i = index_.find(p);
  if (i == LatticeIndex::npos) return std::nullopt;
  return values_[i];
}

ConvolutionPlan::ConvolutionPlan(const Kernel& f, const QuadratureSpec& quad, std::size_t memory_budget)
    : k_(quad.cells_per_unit()), scale_(f.scale()), cell_volume_(quad.cell_volume(f.dim())) {
  const int d = f.dim();
  const LatticeBox cells = quadrature_cells(f, quad);
  LatticePoint mlo(d), mhi(d), shi(d);
  for (int i = 0; i < d; ++i) {
    mlo[i] = floor_div(cells.lo()[i], k_) + 1;
    mhi[i] = std::max(mlo[i], floor_div(cells.hi()[i] - 1, k_) + 2);
    shi[i] = k_;
  }
  offsets_ = LatticeBox(mlo, mhi);
  suboffsets_ = LatticeBox(LatticePoint::zero(d), shi);
  const double bytes = static_cast<double>(offsets_.volume()) * static_cast<double>(suboffsets_.volume()) * sizeof(double);
  if (bytes > static_cast<double>(memory_budget))
    throw CapacityError("convolution table needs " + std::to_string(static_cast<std::size_t>(bytes)) + " bytes",
                        static_cast<std::size_t>(bytes));

  const double delta = quad.resolution;
  const std::size_t mvol = offsets_.volume();
  table_.assign(mvol * suboffsets_.volume(), 0.0);
  Coords lower{};
  const std::span<const double> lower_span(lower.data(), static_cast<std::size_t>(d));
  for (std::size_t si = 0; si < suboffsets_.volume(); ++si) {
    const LatticePoint s = suboffsets_.point_at(si);
    double* row = table_.data() + si * mvol;
    for (std::size_t mi = 0; mi < mvol; ++mi) {
      const LatticePoint m = offsets_.point_at(mi);
      LatticePoint e(d);
      for (int i = 0; i < d; ++i) e[i] = (m[i] - 1) * k_ + (k_ - 1 - s[i]);
      if (!cells.contains(e)) continue;
      for (int i = 0; i < d; ++i) lower[i] = static_cast<double>(e[i]) * delta;
      row[mi] = f.unscaled_cell_value(lower_span, delta);
    }
  }
  total_ = pairwise_sum(table_);

  bool inside = true;
  for (int i = 0; i < d && inside; ++i)
    inside = f.support().lo[i] >= -quad.box_halfwidth && f.support().hi[i] <= quad.box_halfwidth;
  if (inside) {
    tail_bound_ = 0.0;
  } else if (f.decay() && f.decay()->from_radius <= quad.box_halfwidth) {
    const auto& b = *f.decay();
    tail_bound_ = numerics::radial_exp_tail(d, b.constant * b.constant, 2.0 * b.rate, quad.box_halfwidth);
  } else {
    tail_bound_ = kInf;
  }
}

double ConvolutionPlan::kernel_integral() const noexcept { return scale_ * total_ * cell_volume_; }

double ConvolutionPlan::table(std::size_t suboffset, const LatticePoint& m) const {
  if (!offsets_.contains(m)) return 0.0;
  return scale_ * table_[suboffset * offsets_.volume() + offsets_.index_of(m)];
}

std::int64_t ConvolutionPlan::required_window(std::span<const LatticePoint> points) const {
  std::int64_t w = 1;
  for (const auto& t : points)
    for (int i = 0; i < dim(); ++i) {
      // Noise cells j k + s with j in [t - mhi + 1, t - mlo].
      w = std::max({w, -(t[i] - offsets_.hi()[i] + 1), t[i] - offsets_.lo()[i] + 1});
    }
  return w;
}

std::vector<double> ConvolutionPlan::apply(std::span<const LatticePoint> points, const NoiseGrid& grid) const {
  const int d = dim();
  if (grid.dim != d) throw std::invalid_argument("grid and kernel dimensions differ");
  if (grid.cells_per_unit != k_) throw std::invalid_argument("grid and quadrature resolutions differ");
  std::vector<double> out(points.size(), 0.0);
  if (points.empty()) return out;
  for (const auto& t : points) {
    if (t.dim() != d) throw std::invalid_argument("point dimension mismatch");
    for (int i = 0; i < d; ++i)
      if (t[i] - offsets_.hi()[i] + 1 < -grid.window_halfwidth || t[i] - offsets_.lo()[i] + 1 > grid.window_halfwidth)
        throw BoundaryError("kernel support around " + t.to_string() + " leaves the noise window [-" +
                            std::to_string(grid.window_halfwidth) + ", " + std::to_string(grid.window_halfwidth) +
                            ")^" + std::to_string(d));
  }

  const std::size_t mvol = offsets_.volume();
  const LatticeBox grid_cells = grid.cells();

  std::vector<double> base(points.size(), grid.constant * total_);

  if (!grid.gaussian.empty()) {
    for (std::size_t p = 0; p < points.size(); ++p) {
      const LatticePoint& t = points[p];
      PairwiseAccumulator acc;
      for (std::size_t si = 0; si < suboffsets_.volume(); ++si) {
        const LatticePoint s = suboffsets_.point_at(si);
        const double* row = table_.data() + si * mvol;
        for (std::size_t mi = 0; mi < mvol; ++mi) {
          if (row[mi] == 0.0) continue;
          const LatticePoint m = offsets_.point_at(mi);
          LatticePoint c(d);
          for (int i = 0; i < d; ++i) c[i] = (t[i] - m[i]) * k_ + s[i];
          acc.add(row[mi] * grid.gaussian[grid_cells.index_of(c)]);
        }
      }
      base[p] += acc.sum();
    }
  }

  if (!grid.jumps.empty()) {
    const LatticeBox targets = LatticeBox::bounding(points);
    std::vector<double> scatter(targets.volume(), 0.0);
    // (suboffset, integer cell) of each jump; processing by suboffset keeps
    // one table slice hot.
    struct Located {
      std::size_t si;
      LatticePoint j;
      double size;
    };
    std::vector<Located> located;
    located.reserve(grid.jumps.size());
    for (const auto& jump : grid.jumps) {
      const LatticePoint c = grid_cells.point_at(jump.cell);
      LatticePoint j(d), s(d);
      for (int i = 0; i < d; ++i) {
        j[i] = floor_div(c[i], k_);
        s[i] = c[i] - j[i] * k_;
      }
      located.push_back({suboffsets_.index_of(s), j, jump.size});
    }
    std::stable_sort(located.begin(), located.end(), [](const Located& a, const Located& b) {
      return a.si != b.si ? a.si < b.si : a.j < b.j;
    });
    for (const auto& jump : located) {
      // Offsets m with j + m inside the target box.
      const LatticeBox reach = offsets_.intersect(targets.shifted(-jump.j));
      if (reach.empty()) continue;
      const double* row = table_.data() + jump.si * mvol;
      const std::int64_t len = reach.extent(d - 1);
      const std::size_t rows = reach.volume() / static_cast<std::size_t>(len);
      LatticePoint m = reach.lo();
      for (std::size_t r = 0; r < rows; ++r) {
        const double* src = row + offsets_.index_of(m);
        double* dst = scatter.data() + targets.index_of(m + jump.j);
        for (std::int64_t x = 0; x < len; ++x) dst[x] += jump.size * src[x];
        for (int axis = d - 2; axis >= 0; --axis) {
          if (++m[axis] < reach.hi()[axis]) break;
          m[axis] = reach.lo()[axis];
        }
      }
    }
    for (std::size_t p = 0; p < points.size(); ++p) base[p] += scatter[targets.index_of(points[p])];
  }

  for (std::size_t p = 0; p < points.size(); ++p) out[p] = scale_ * base[p];
  return out;
}

FieldSample convolve_at(std::span<const LatticePoint> points, const Kernel& kernel, const NoiseGrid& grid,
                        const QuadratureSpec& quad) {
  const ConvolutionPlan plan(kernel, quad);
  std::vector<double> values = plan.apply(points, grid);
  return FieldSample(std::vector<LatticePoint>(points.begin(), points.end()), std::move(values));
}

std::vector<LatticePoint> lagged_cover(std::span<const LatticePoint> points, std::span<const LatticePoint> lags) {
  std::vector<LatticePoint> all(points.begin(), points.end());
  for (const auto& lag : lags)
    if (!lag.is_zero())
      for (const auto& p : points) all.push_back(p + lag);
  return canonical(std::move(all));
}

Simulator::Simulator(const Kernel& kernel, const LevyTriplet& triplet, std::vector<LatticePoint> points,
                     const QuadratureSpec& quad, std::optional<std::int64_t> window_halfwidth,
                     std::size_t memory_budget)
    : triplet_(triplet),
      quad_(quad),
      plan_(kernel, quad, memory_budget),
      points_(canonical(std::move(points))),
      memory_budget_(memory_budget) {
  if (points_.empty()) throw std::invalid_argument("simulator needs at least one point");
  window_ = window_halfwidth ? *window_halfwidth : plan_.required_window(points_);
}

NoiseGrid Simulator::draw_grid(RngStream& stream) const {
  return build_noise_grid(triplet_, plan_.dim(), window_, quad_.resolution, stream, memory_budget_);
}

FieldSample Simulator::run(RngStream& stream) const {
  const NoiseGrid grid = draw_grid(stream);
  return FieldSample(points_, plan_.apply(points_, grid));
}

FieldSample simulate(const Kernel& kernel, const LevyTriplet& triplet, std::span<const LatticePoint> points,
                     std::span<const LatticePoint> lags, const QuadratureSpec& quad, RngStream& stream) {
  const Simulator sim(kernel, triplet, lagged_cover(points, lags), quad);
  return sim.run(stream);
}

}  // namespace levyfield
