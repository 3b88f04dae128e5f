#include "levyfield/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "levyfield/errors.hpp"
#include "levyfield/numerics.hpp"
#include "levyfield/summation.hpp"

namespace levyfield {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_certificate(const Kernel& f) {
  if (!f.bounded_support() && !f.decay())
    throw UnsupportedError("kernel '" + f.name() + "' has neither bounded support nor a decay certificate");
}

bool support_in_window(const Kernel& f, double h) {
  for (int i = 0; i < f.dim(); ++i)
    if (f.support().lo[i] < -h || f.support().hi[i] > h) return false;
  return true;
}

// sum_{q >= q0} count(q) C exp(-rate q), count(q) = (2q + 2)^d - (2q)^d.
double unit_cell_tail(int d, double constant, double rate, std::int64_t q0) {
  double s = 0.0;
  for (std::int64_t q = std::max<std::int64_t>(q0, 0);; ++q) {
    const double cnt = std::pow(2.0 * q + 2.0, d) - std::pow(2.0 * q, d);
    const double term = cnt * constant * std::exp(-rate * static_cast<double>(q));
    s += term;
    if (term < 1e-17 * s || term == 0.0) break;
  }
  return s;
}

// Bound on sum_l |G(l) - G_window(l)| for weights bounded by 1.
double window_tail(const Kernel& f, const QuadratureSpec& quad, double unit_cell_norm_sum) {
  const double h = quad.box_halfwidth;
  if (support_in_window(f, h)) return 0.0;
  if (!f.decay() || f.decay()->from_radius > h) return kInf;
  const auto& b = *f.decay();
  const double tail = unit_cell_tail(f.dim(), b.constant, b.rate, static_cast<std::int64_t>(std::floor(h)));
  return 2.0 * (unit_cell_norm_sum + tail) * tail;
}

// Sum of squares of the 2n-wide moving sums of v along every axis.
double box_filter_energy(const std::vector<double>& v, std::array<std::int64_t, kMaxDim> dims, int d,
                         std::int64_t n) {
  std::vector<double> cur = v;
  const std::int64_t w = 2 * n;
  for (int a = 0; a < d; ++a) {
    auto out_dims = dims;
    out_dims[a] = dims[a] + w - 1;
    std::int64_t outer = 1, inner = 1;
    for (int i = 0; i < a; ++i) outer *= dims[i];
    for (int i = a + 1; i < d; ++i) inner *= dims[i];
    const std::int64_t len = dims[a], out_len = out_dims[a];
    std::vector<double> out(static_cast<std::size_t>(outer * out_len * inner));
    std::vector<double> prefix(static_cast<std::size_t>(len + 1));
    for (std::int64_t o = 0; o < outer; ++o)
      for (std::int64_t i = 0; i < inner; ++i) {
        prefix[0] = 0.0;
        for (std::int64_t x = 0; x < len; ++x)
          prefix[static_cast<std::size_t>(x + 1)] = prefix[static_cast<std::size_t>(x)] + cur[static_cast<std::size_t>((o * len + x) * inner + i)];
        for (std::int64_t u = 0; u < out_len; ++u) {
          const std::int64_t hi = std::min(u + 1, len), lo = std::max<std::int64_t>(u - w + 1, 0);
          out[static_cast<std::size_t>((o * out_len + u) * inner + i)] =
              prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)];
        }
      }
    cur.swap(out);
    dims = out_dims;
  }
  PairwiseAccumulator acc;
  for (double x : cur) acc.add(x * x);
  return acc.sum();
}

}  // namespace

LatticeGram lattice_gram(const Kernel& f, const QuadratureSpec& quad, std::span<const LatticePoint> lags,
                         std::span<const std::int64_t> box_n) {
  const SubOffsetSlices slices(f, quad);
  const int d = slices.dim();
  const LatticeBox& J = slices.offsets();
  const std::size_t vol = J.volume();
  std::array<std::int64_t, kMaxDim> dims{};
  for (int i = 0; i < d; ++i) dims[i] = J.extent(i);

  std::vector<double> v(vol), cellsq(vol, 0.0);
  PairwiseAccumulator complete;
  std::vector<PairwiseAccumulator> lag_acc(lags.size()), box_acc(box_n.size());
  for (const auto n : box_n)
    if (n < 1) throw std::invalid_argument("box size n must be >= 1");

  // Overlap boxes J ∩ (J - l) for the requested lags.
  std::vector<LatticeBox> overlap;
  for (const auto& l : lags) {
    if (l.dim() != d) throw std::invalid_argument("lag dimension mismatch");
    overlap.push_back(J.intersect(J.shifted(-l)));
  }

  for (std::size_t si = 0; si < slices.count(); ++si) {
    slices.fill(si, v);
    const double s = pairwise_sum(v);
    complete.add(s * s);
    for (std::size_t i = 0; i < vol; ++i) cellsq[i] += v[i] * v[i];

    for (std::size_t li = 0; li < lags.size(); ++li) {
      const LatticeBox& o = overlap[li];
      if (o.empty()) {
        lag_acc[li].add(0.0);
        continue;
      }
      const std::int64_t len = o.extent(d - 1);
      const std::size_t rows = o.volume() / static_cast<std::size_t>(len);
      LatticePoint j = o.lo();
      PairwiseAccumulator dot;
      for (std::size_t r = 0; r < rows; ++r) {
        const double* a = v.data() + J.index_of(j);
        const double* b = v.data() + J.index_of(j + lags[li]);
        for (std::int64_t x = 0; x < len; ++x) dot.add(a[x] * b[x]);
        for (int axis = d - 2; axis >= 0; --axis) {
          if (++j[axis] < o.hi()[axis]) break;
          j[axis] = o.lo()[axis];
        }
      }
      lag_acc[li].add(dot.sum());
    }
    for (std::size_t ni = 0; ni < box_n.size(); ++ni) box_acc[ni].add(box_filter_energy(v, dims, d, box_n[ni]));
  }

  const double cv = slices.cell_volume();
  LatticeGram g;
  g.complete_sum = cv * complete.sum();
  for (std::size_t li = 0; li < lags.size(); ++li) g.lag_values[lags[li]] = cv * lag_acc[li].sum();
  for (std::size_t ni = 0; ni < box_n.size(); ++ni)
    g.box_sums.push_back(cv * box_acc[ni].sum() / std::pow(2.0 * static_cast<double>(box_n[ni]), d));
  PairwiseAccumulator norms;
  for (double x : cellsq) norms.add(std::sqrt(cv * x));
  g.unit_cell_norm_sum = norms.sum();
  return g;
}

AvarResult mean_avar(const Kernel& f, double sigma2, const PairWeights& weights, const QuadratureSpec& quad,
                     std::int64_t breakdown_radius) {
  require_certificate(f);
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("sigma2 must be >= 0");
  if (!weights.complete()) throw DomainError("mean_avar needs weights for every lag");
  if (weights.dim() != f.dim()) throw std::invalid_argument("weights and kernel dimensions differ");
  if (weights.max_weight() > 1.0) throw DomainError("pair weights must be bounded by 1");

  std::vector<LatticePoint> lags;
  for (const auto& [l, a] : weights.exceptions()) lags.push_back(l);
  std::vector<LatticePoint> breakdown;
  if (breakdown_radius >= 0) {
    LatticePoint lo(f.dim()), hi(f.dim());
    for (int i = 0; i < f.dim(); ++i) {
      lo[i] = -breakdown_radius;
      hi[i] = breakdown_radius + 1;
    }
    breakdown = LatticeBox(lo, hi).points();
  }
  lags.insert(lags.end(), breakdown.begin(), breakdown.end());
  lags = canonical(std::move(lags));

  const LatticeGram g = lattice_gram(f, quad, lags);
  PairwiseAccumulator acc;
  acc.add(weights.far() * g.complete_sum);
  for (const auto& [l, a] : weights.exceptions()) acc.add((a - weights.far()) * g.lag_values.at(l));

  AvarResult r;
  r.value = sigma2 * acc.sum();
  r.truncation_radius = static_cast<std::int64_t>(std::ceil(2.0 * quad.box_halfwidth));
  r.tail_bound = sigma2 * weights.max_weight() * window_tail(f, quad, g.unit_cell_norm_sum);
  for (const auto& l : breakdown) r.term_breakdown.push_back({l, sigma2 * weights.at(l) * g.lag_values.at(l)});
  return r;
}

std::vector<AvarResult> box_mean_var(const Kernel& f, double sigma2, std::span<const std::int64_t> n,
                                     const QuadratureSpec& quad) {
  require_certificate(f);
  const LatticeGram g = lattice_gram(f, quad, {}, n);
  const double tail = sigma2 * window_tail(f, quad, g.unit_cell_norm_sum);
  std::vector<AvarResult> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    AvarResult r;
    r.value = sigma2 * g.box_sums[i];
    r.truncation_radius = 2 * n[i] - 1;
    r.tail_bound = tail;
    out.push_back(r);
  }
  return out;
}

namespace {

struct AcovSetup {
  SampledKernel fs;
  double sigma2;
  double kappa;  // (eta - 3) sigma^4
  std::int64_t radius;
  double tail_bound;
  std::map<LatticePoint, double> gram;

  double G(const LatticePoint& l) {
    auto it = gram.find(l);
    if (it != gram.end()) return it->second;
    const double v = SampledKernel::lag_product(fs, fs, l);
    gram.emplace(l, v);
    return v;
  }
};

AcovSetup make_acov_setup(const Kernel& f, const LevyTriplet& triplet, std::span<const LatticePoint> lags,
                          const PairWeights& weights, const QuadratureSpec& quad, double rel_tol) {
  require_certificate(f);
  const MomentSet m = derive_moments(triplet);
  if (m.mean != 0.0) throw DomainError("autocovariance limits need a mean-zero basis");
  const double eta = m.eta();
  if (!weights.complete()) throw DomainError("acov_avar needs weights for every lag");
  if (weights.dim() != f.dim()) throw std::invalid_argument("weights and kernel dimensions differ");

  AcovSetup s{SampledKernel(f, quad), m.sigma2, (eta - 3.0) * m.sigma2 * m.sigma2, 0, 0.0, {}};
  const int d = f.dim();
  std::int64_t D = 0;
  for (const auto& l : lags) {
    if (l.dim() != d) throw std::invalid_argument("lag dimension mismatch");
    D = std::max(D, l.linf_norm());
  }
  const auto cap = static_cast<std::int64_t>(std::ceil(2.0 * quad.box_halfwidth)) + D;

  if (f.bounded_support()) {
    s.radius = std::min(cap, static_cast<std::int64_t>(std::ceil(2.0 * f.support_radius())) + D);
    s.tail_bound = support_in_window(f, quad.box_halfwidth) ? 0.0 : kInf;
    return s;
  }
  const auto& b = *f.decay();
  const double s4 = m.sigma2 * m.sigma2;
  const double g0 = std::abs(s.G(LatticePoint::zero(d)));
  const double l2 = std::sqrt(g0);
  const double sup = f.singularities().empty() ? s.fs.max_abs() : kInf;
  // int |f(v) f(v + l)| dv <= 2 ||f||_2 (int_{||x|| >= |l|/2} f^2)^{1/2}.
  auto pair_bound = [&](double r) {
    if (r / 2.0 < b.from_radius) return kInf;
    return 2.0 * l2 * std::sqrt(numerics::radial_exp_tail(d, b.constant * b.constant, 2.0 * b.rate, r / 2.0));
  };
  auto tail_from = [&](std::int64_t R) {
    double t = 0.0;
    for (std::int64_t k = R + 1;; ++k) {
      const double g = pair_bound(static_cast<double>(k - D));
      const double quartic = s.kappa == 0.0 ? 0.0 : std::abs(s.kappa) * sup * sup * g;
      const double term = shell_count(d, k) * (quartic + 2.0 * s4 * g0 * g);
      if (!std::isfinite(term)) return kInf;
      t += term;
      if (term <= 1e-17 * t || term == 0.0) break;
    }
    return weights.max_weight() * t;
  };
  const double scale = std::max(s4 * g0 * g0, std::numeric_limits<double>::min());
  std::int64_t R = static_cast<std::int64_t>(std::ceil(2.0 * b.from_radius)) + D;
  while (R < cap && !(tail_from(R) <= rel_tol * scale)) ++R;
  s.radius = R;
  s.tail_bound = tail_from(R);
  return s;
}

double acov_entry(AcovSetup& s, const LatticePoint& dp, const LatticePoint& dq, const PairWeights& weights,
                  PairingForm form) {
  const int d = dp.dim();
  LatticePoint lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = -s.radius;
    hi[i] = s.radius + 1;
  }
  const LatticeBox box(lo, hi);
  const double s4 = s.sigma2 * s.sigma2;
  const LatticePoint zero = LatticePoint::zero(d);
  PairwiseAccumulator acc;
  for (std::size_t i = 0; i < box.volume(); ++i) {
    const LatticePoint l = box.point_at(i);
    const double a = weights.at(l);
    if (a == 0.0) continue;
    double quartic = 0.0;
    if (s.kappa != 0.0) {
      const SampledKernel* fac[] = {&s.fs, &s.fs, &s.fs, &s.fs};
      const LatticePoint sh[] = {zero, dp, l, l + dq};
      quartic = s.kappa * SampledKernel::shifted_product(fac, sh);
    }
    double pairs;
    if (form == PairingForm::standard)
      pairs = s.G(l) * s.G(l + dq - dp) + s.G(l + dq) * s.G(l - dp);
    else
      pairs = s.G(l) * s.G(l + dp - dq) + s.G(l + dp) * s.G(l + dq);
    acc.add(a * (quartic + s4 * pairs));
  }
  return acc.sum();
}

}  // namespace

AvarResult acov_avar(const Kernel& f, const LevyTriplet& triplet, std::span<const LatticePoint> lags,
                     const PairWeights& weights, const QuadratureSpec& quad, PairingForm form, double rel_tol) {
  if (lags.empty()) throw std::invalid_argument("acov_avar needs at least one lag");
  AcovSetup s = make_acov_setup(f, triplet, lags, weights, quad, rel_tol);
  const std::size_t m = lags.size();
  AvarResult r;
  r.matrix.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q) r.matrix[p][q] = acov_entry(s, lags[p], lags[q], weights, form);
  r.value = r.matrix[0][0];
  r.truncation_radius = s.radius;
  r.tail_bound = s.tail_bound;
  for (std::size_t p = 0; p < m; ++p) r.term_breakdown.push_back({lags[p], r.matrix[p][p]});
  return r;
}

double acov_cov_limit(const Kernel& f, const LevyTriplet& triplet, const LatticePoint& dp, const LatticePoint& dq,
                      const PairWeights& weights, const QuadratureSpec& quad, PairingForm form, double rel_tol) {
  const LatticePoint both[] = {dp, dq};
  AcovSetup s = make_acov_setup(f, triplet, both, weights, quad, rel_tol);
  return acov_entry(s, dp, dq, weights, form);
}

double fourth_moment(const Kernel& f1, const Kernel& f2, const Kernel& f3, const Kernel& f4,
                     const LevyTriplet& triplet, const QuadratureSpec& quad) {
  const MomentSet m = derive_moments(triplet);
  if (m.mean != 0.0) throw DomainError("fourth_moment needs a mean-zero basis");
  const double s4 = m.sigma2 * m.sigma2;
  double quartic = 0.0;
  if (s4 > 0.0) {
    const double kappa = (m.eta() - 3.0) * s4;
    if (kappa != 0.0) {
      const Kernel all[] = {f1, f2, f3, f4};
      quartic = kappa * integrate_product(all, quad).value;
    }
  }
  auto ip = [&](const Kernel& a, const Kernel& b) { return inner_product(a, b, quad).value; };
  return quartic + s4 * (ip(f1, f2) * ip(f3, f4) + ip(f1, f3) * ip(f2, f4) + ip(f1, f4) * ip(f2, f3));
}

SummabilityReport summability_diagnostic(const Kernel& f, const PairWeights& weights, const QuadratureSpec& quad,
                                         std::span<const std::int64_t> radii, std::optional<double> epsilon) {
  require_certificate(f);
  if (!weights.complete()) throw DomainError("summability_diagnostic needs weights for every lag");
  if (radii.empty()) throw std::invalid_argument("summability_diagnostic needs at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (radii[i] < 0 || (i > 0 && radii[i] <= radii[i - 1]))
      throw std::invalid_argument("radii must be nonnegative and increasing");
  const int d = f.dim();

  SummabilityReport rep;
  rep.radii.assign(radii.begin(), radii.end());
  const double rate = f.decay() ? f.decay()->rate : 1.0;
  rep.epsilon = epsilon ? *epsilon : 0.5 * rate;
  if (!(rep.epsilon > 0.0) || (f.decay() && !f.bounded_support() && !(rep.epsilon < rate)))
    throw std::invalid_argument("epsilon must lie in (0, decay rate)");

  // ||f exp(eps ||.||)||_2^2 on the grid plus the certified remainder.
  {
    const LatticeBox cells = quadrature_cells(f, quad);
    const double delta = quad.resolution;
    PairwiseAccumulator acc;
    Coords lower{};
    for (std::size_t i = 0; i < cells.volume(); ++i) {
      const LatticePoint c = cells.point_at(i);
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) {
        lower[a] = static_cast<double>(c[a]) * delta;
        const double mid = lower[a] + 0.5 * delta;
        r2 += mid * mid;
      }
      const double v = f.cell_value(std::span<const double>(lower.data(), static_cast<std::size_t>(d)), delta);
      acc.add(v * v * std::exp(2.0 * rep.epsilon * std::sqrt(r2)));
    }
    rep.weighted_norm = acc.sum() * quad.cell_volume(d);
    if (!support_in_window(f, quad.box_halfwidth)) {
      if (f.decay() && f.decay()->from_radius <= quad.box_halfwidth) {
        const auto& b = *f.decay();
        rep.weighted_norm += numerics::radial_exp_tail(d, b.constant * b.constant, 2.0 * (b.rate - rep.epsilon),
                                                       quad.box_halfwidth);
      } else {
        rep.weighted_norm = kInf;
      }
    }
  }

  const std::int64_t rmax = radii.back();
  const std::vector<LatticePoint> lags = [&] {
    LatticePoint lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
      lo[i] = -rmax;
      hi[i] = rmax + 1;
    }
    return LatticeBox(lo, hi).points();
  }();
  const LatticeGram g = lattice_gram(f.absolute(), quad, lags);
  // int |f(v) f(v + l)| vanishes once some |l_i| reaches the support width.
  double width = kInf;
  if (f.bounded_support()) {
    width = 0.0;
    for (int i = 0; i < d; ++i) width = std::max(width, f.support().hi[i] - f.support().lo[i]);
  }
  for (const auto R : radii) {
    PairwiseAccumulator acc;
    for (const auto& l : lags)
      if (l.linf_norm() <= R) acc.add(weights.at(l) * g.lag_values.at(l));
    rep.partial_sums.push_back(acc.sum());
    const double tb = static_cast<double>(R + 1) >= width
                          ? 0.0
                          : weights.max_weight() * rep.weighted_norm * numerics::lattice_exp_tail(d, rep.epsilon, R + 1);
    rep.tail_bounds.push_back(tb);
  }
  const std::size_t k = rep.partial_sums.size();
  if (k >= 2 && rep.partial_sums[k - 1] != 0.0)
    rep.plateau_ratio = (rep.partial_sums[k - 1] - rep.partial_sums[k - 2]) / rep.partial_sums[k - 1];
  return rep;
}

}  // namespace levyfield
