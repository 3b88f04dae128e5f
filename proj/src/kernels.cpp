#include "levyfield/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levyfield/errors.hpp"
#include "levyfield/numerics.hpp"

namespace levyfield {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm2(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double norm2(const Coords& a, int dim) noexcept {
  return norm2(std::span<const double>(a.data(), static_cast<std::size_t>(dim)));
}

Coords to_coords(std::span<const double> x) {
  Coords c{};
  std::copy(x.begin(), x.end(), c.begin());
  return c;
}

}  // namespace

SupportBox SupportBox::unbounded() {
  SupportBox b;
  b.lo.fill(-kInf);
  b.hi.fill(kInf);
  return b;
}

bool SupportBox::bounded(int dim) const noexcept {
  for (int i = 0; i < dim; ++i)
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) return false;
  return true;
}

bool SupportBox::contains(std::span<const double> x) const noexcept {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < lo[i] || x[i] >= hi[i]) return false;
  return true;
}

Kernel::Kernel(int dim, Evaluator f, std::string name) : dim_(dim), f_(std::move(f)), name_(std::move(name)) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("kernel dimension out of range");
  if (!f_) throw std::invalid_argument("kernel evaluator is empty");
}

Kernel& Kernel::set_support(const SupportBox& box) {
  support_ = box;
  return *this;
}

Kernel& Kernel::set_decay(const DecayBound& bound) {
  if (!(bound.rate > 0.0) || !(bound.constant >= 0.0))
    throw std::invalid_argument("decay bound needs rate > 0 and constant >= 0");
  decay_ = bound;
  return *this;
}

Kernel& Kernel::add_singularity(Singularity s) {
  singular_.push_back(std::move(s));
  return *this;
}

double Kernel::support_radius() const noexcept {
  double r = 0.0;
  for (int i = 0; i < dim_; ++i) r = std::max({r, std::abs(support_.lo[i]), std::abs(support_.hi[i])});
  return r;
}

bool Kernel::singular_at_origin() const noexcept {
  return std::any_of(singular_.begin(), singular_.end(), [&](const Singularity& s) {
    return norm2(s.point, dim_) == 0.0;
  });
}

double Kernel::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("kernel argument dimension mismatch");
  for (const auto& s : singular_)
    if (std::equal(x.begin(), x.end(), s.point.begin()))
      throw DomainError("kernel '" + name_ + "' evaluated at its singularity");
  return scale_ * f_(x);
}

double Kernel::operator()(std::initializer_list<double> x) const {
  return (*this)(std::span<const double>(x.begin(), x.size()));
}

double Kernel::cell_value(std::span<const double> lower, double edge) const {
  return scale_ * unscaled_cell_value(lower, edge);
}

double Kernel::unscaled_cell_value(std::span<const double> lower, double edge) const {
  Coords mid{};
  for (int i = 0; i < dim_; ++i) mid[i] = lower[i] + 0.5 * edge;
  for (const auto& s : singular_) {
    bool inside = true;
    for (int i = 0; i < dim_ && inside; ++i) inside = s.point[i] >= lower[i] && s.point[i] <= lower[i] + edge;
    if (!inside) continue;
    if (s.cell_average) return s.cell_average(lower, edge);
    bool at_mid = true;
    for (int i = 0; i < dim_; ++i) at_mid = at_mid && mid[i] == s.point[i];
    if (at_mid)
      for (int i = 0; i < dim_; ++i) mid[i] += 0.25 * edge;
    break;
  }
  return f_(std::span<const double>(mid.data(), static_cast<std::size_t>(dim_)));
}

Kernel Kernel::truncated(double h) const {
  if (!(h > 0.0)) throw std::invalid_argument("truncation halfwidth must be > 0");
  SupportBox window;
  for (int i = 0; i < kMaxDim; ++i) {
    window.lo[i] = -h;
    window.hi[i] = h;
  }
  Kernel out = *this;
  const int d = dim_;
  auto f = f_;
  out.f_ = [f, window](std::span<const double> x) { return window.contains(x) ? f(x) : 0.0; };
  out.name_ = name_ + "|trunc(" + std::to_string(h) + ")";
  for (int i = 0; i < d; ++i) {
    out.support_.lo[i] = std::max(support_.lo[i], -h);
    out.support_.hi[i] = std::min(support_.hi[i], h);
  }
  out.singular_.clear();
  for (const auto& s : singular_) {
    bool kept = true;
    for (int i = 0; i < d; ++i) kept = kept && s.point[i] >= -h && s.point[i] <= h;
    if (!kept) continue;
    Singularity t = s;
    if (s.cell_average) {
      auto avg = s.cell_average;
      t.cell_average = [avg, window, d](std::span<const double> lower, double edge) {
        Coords mid{};
        for (int i = 0; i < d; ++i) mid[i] = lower[i] + 0.5 * edge;
        return window.contains(std::span<const double>(mid.data(), static_cast<std::size_t>(d)))
                   ? avg(lower, edge)
                   : 0.0;
      };
    }
    out.singular_.push_back(std::move(t));
  }
  return out;
}

Kernel Kernel::shifted(std::span<const double> a) const {
  if (static_cast<int>(a.size()) != dim_) throw std::invalid_argument("shift dimension mismatch");
  const Coords by = to_coords(a);
  const int d = dim_;
  Kernel out = *this;
  auto f = f_;
  out.f_ = [f, by, d](std::span<const double> x) {
    Coords y{};
    for (int i = 0; i < d; ++i) y[i] = x[i] - by[i];
    return f(std::span<const double>(y.data(), static_cast<std::size_t>(d)));
  };
  for (int i = 0; i < d; ++i) {
    out.support_.lo[i] += by[i];
    out.support_.hi[i] += by[i];
  }
  if (decay_) {
    const double shift = norm2(by, d);
    out.decay_->constant = decay_->constant * std::exp(decay_->rate * shift);
    out.decay_->from_radius = decay_->from_radius + shift;
  }
  for (auto& s : out.singular_) {
    for (int i = 0; i < d; ++i) s.point[i] += by[i];
    if (s.cell_average) {
      auto avg = s.cell_average;
      s.cell_average = [avg, by, d](std::span<const double> lower, double edge) {
        Coords y{};
        for (int i = 0; i < d; ++i) y[i] = lower[i] - by[i];
        return avg(std::span<const double>(y.data(), static_cast<std::size_t>(d)), edge);
      };
    }
  }
  return out;
}

Kernel Kernel::shifted(const LatticePoint& a) const {
  if (a.dim() != dim_) throw std::invalid_argument("shift dimension mismatch");
  Coords c{};
  for (int i = 0; i < dim_; ++i) c[i] = static_cast<double>(a[i]);
  return shifted(std::span<const double>(c.data(), static_cast<std::size_t>(dim_)));
}

Kernel Kernel::reflected() const {
  const int d = dim_;
  Kernel out = *this;
  auto f = f_;
  out.f_ = [f, d](std::span<const double> x) {
    Coords y{};
    for (int i = 0; i < d; ++i) y[i] = -x[i];
    return f(std::span<const double>(y.data(), static_cast<std::size_t>(d)));
  };
  for (int i = 0; i < d; ++i) {
    out.support_.lo[i] = -support_.hi[i];
    out.support_.hi[i] = -support_.lo[i];
  }
  for (auto& s : out.singular_) {
    for (int i = 0; i < d; ++i) s.point[i] = -s.point[i];
    if (s.cell_average) {
      auto avg = s.cell_average;
      s.cell_average = [avg, d](std::span<const double> lower, double edge) {
        Coords y{};
        for (int i = 0; i < d; ++i) y[i] = -lower[i] - edge;
        return avg(std::span<const double>(y.data(), static_cast<std::size_t>(d)), edge);
      };
    }
  }
  return out;
}

Kernel Kernel::scaled(double alpha) const {
  Kernel out = *this;
  out.scale_ = scale_ * alpha;
  if (decay_) out.decay_->constant = decay_->constant * std::abs(alpha);
  return out;
}

Kernel Kernel::absolute() const {
  Kernel out = *this;
  auto f = f_;
  out.f_ = [f](std::span<const double> x) { return std::abs(f(x)); };
  out.scale_ = std::abs(scale_);
  out.name_ = "|" + name_ + "|";
  for (auto& s : out.singular_)
    if (s.cell_average) {
      auto avg = s.cell_average;
      s.cell_average = [avg](std::span<const double> lower, double edge) {
        return std::abs(avg(lower, edge));
      };
    }
  return out;
}

Kernel indicator_kernel(std::span<const double> lo, std::span<const double> hi) {
  if (lo.size() != hi.size()) throw std::invalid_argument("indicator corners differ in dimension");
  const int d = static_cast<int>(lo.size());
  SupportBox box = SupportBox::unbounded();
  for (int i = 0; i < d; ++i) {
    if (!(lo[i] < hi[i])) throw std::invalid_argument("indicator box must have lo < hi");
    box.lo[i] = lo[i];
    box.hi[i] = hi[i];
  }
  Kernel k(d, [box](std::span<const double> x) { return box.contains(x) ? 1.0 : 0.0; }, "indicator");
  k.set_support(box);
  return k;
}

Kernel box_kernel(int dim) {
  const std::vector<double> lo(static_cast<std::size_t>(dim), 0.0), hi(static_cast<std::size_t>(dim), 1.0);
  Kernel k = indicator_kernel(lo, hi);
  return k;
}

Kernel exp_kernel(int dim, double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exp kernel rate must be > 0");
  Kernel k(dim, [rate](std::span<const double> x) { return std::exp(-rate * norm2(x)); }, "exp");
  k.set_decay({1.0, rate, 0.0});
  return k;
}

Kernel gauss_kernel(int dim, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("gauss kernel scale must be > 0");
  const double c = 0.5 / (scale * scale);
  Kernel k(dim, [c](std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return std::exp(-c * r2);
  }, "gauss");
  // r^2 >= r for r >= 1
  k.set_decay({1.0, c, 1.0});
  return k;
}

Kernel green3d(double mu, double prefactor) {
  if (!(mu > 0.0)) throw std::invalid_argument("green3d requires mu > 0");
  const double root = std::sqrt(mu);
  Kernel k(3, [root, prefactor](std::span<const double> x) {
    const double r = norm2(x);
    return prefactor * std::exp(-root * r) / r;
  }, "green3d");
  // 1/r <= 1 for r >= 1
  k.set_decay({std::abs(prefactor), root, 1.0});
  Kernel::Singularity s;
  s.cell_average = [root, prefactor](std::span<const double> lower, double edge) {
    return prefactor * yukawa_cell_average(lower, edge, root);
  };
  k.add_singularity(std::move(s));
  return k;
}

Kernel zero_kernel(int dim) {
  Kernel k(dim, [](std::span<const double>) { return 0.0; }, "zero");
  SupportBox box = SupportBox::unbounded();
  for (int i = 0; i < dim; ++i) box.lo[i] = box.hi[i] = 0.0;
  k.set_support(box);
  return k;
}

double yukawa_corner_box_integral(double a, double b, double c, double k) {
  static const numerics::GaussRule rule = numerics::gauss_legendre(24);
  // Pyramid with apex at the origin over the face {x = a} x [0,b] x [0,c]:
  // points lambda (a, y, z), lambda in [0,1]; r = lambda rho, dV = lambda^2 a dlambda dy dz.
  auto pyramid = [&](double far, double e1, double e2) {
    if (far <= 0.0 || e1 <= 0.0 || e2 <= 0.0) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double y = 0.5 * e1 * (rule.nodes[i] + 1.0);
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double z = 0.5 * e2 * (rule.nodes[j] + 1.0);
        const double rho = std::sqrt(far * far + y * y + z * z);
        const double kr = k * rho;
        // int_0^1 lambda e^{-k rho lambda} dlambda
        const double radial = kr < 1e-6 ? 0.5 - kr / 3.0 : (1.0 - (1.0 + kr) * std::exp(-kr)) / (kr * kr);
        total += rule.weights[i] * rule.weights[j] * far / rho * radial;
      }
    }
    return total * 0.25 * e1 * e2;
  };
  return pyramid(a, b, c) + pyramid(b, a, c) + pyramid(c, a, b);
}

double yukawa_cell_average(std::span<const double> lower, double edge, double k) {
  // Split the cell at the coordinate planes through the origin; each piece is
  // a box with the origin as a corner.
  std::array<std::array<double, 2>, 3> ext{};
  for (int i = 0; i < 3; ++i) {
    const double lo = lower[i], hi = lower[i] + edge;
    if (lo > 0.0 || hi < 0.0) {
      Coords mid{lower[0] + 0.5 * edge, lower[1] + 0.5 * edge, lower[2] + 0.5 * edge, 0.0};
      const double r = norm2(mid, 3);
      return std::exp(-k * r) / r;
    }
    ext[i] = {-lo, hi};
  }
  double total = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) total += yukawa_corner_box_integral(ext[0][a], ext[1][b], ext[2][c], k);
  return total / (edge * edge * edge);
}

}  // namespace levyfield
