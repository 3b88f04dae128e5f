#include "levyfield/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "levyfield/errors.hpp"
#include "levyfield/numerics.hpp"

namespace levyfield {

namespace {

void check_box_args(std::int64_t n, int dim) {
  if (n < 1) throw std::invalid_argument("sampling set needs n >= 1");
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("sampling dimension out of range");
}

double ma_variance(const ThresholdedMaProvenance& p) {
  double s = 0.0;
  for (const auto& [l, a] : p.coeffs) s += a * a;
  return s;
}

double ma_autocov(const ThresholdedMaProvenance& p, const LatticePoint& lag) {
  double s = 0.0;
  for (const auto& [j, a] : p.coeffs) {
    auto it = p.coeffs.find(j + lag);
    if (it != p.coeffs.end()) s += a * it->second;
  }
  return s;
}

}  // namespace

std::string provenance_name(const Provenance& p) {
  switch (p.index()) {
    case 0: return "box";
    case 1: return "bernoulli";
    default: return "thresholded_ma";
  }
}

SamplingSet::SamplingSet(int dim, std::int64_t n, std::vector<LatticePoint> points, Provenance provenance)
    : dim_(dim), n_(n), points_(canonical(std::move(points))), provenance_(std::move(provenance)) {
  check_box_args(n, dim);
  for (const auto& p : points_) {
    if (p.dim() != dim) throw std::invalid_argument("sampling point dimension mismatch");
    for (int i = 0; i < dim; ++i)
      if (p[i] < -n || p[i] >= n) throw std::invalid_argument("sampling point " + p.to_string() + " outside [-n, n)^d");
  }
  if (!points_.empty()) index_ = LatticeIndex(points_);
}

SamplingSet box_set(std::int64_t n, int dim) {
  check_box_args(n, dim);
  return SamplingSet(dim, n, LatticeBox::centered(n, dim).points(), BoxProvenance{});
}

SamplingSet bernoulli_set(std::int64_t n, int dim, double p, const RngStream& stream) {
  check_box_args(n, dim);
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli p must lie in (0, 1]");
  std::vector<LatticePoint> kept;
  for (const auto& t : LatticeBox::centered(n, dim).points()) {
    RngStream coin = stream.at(t);
    if (coin.uniform() < p) kept.push_back(t);
  }
  return SamplingSet(dim, n, std::move(kept), BernoulliProvenance{p});
}

SamplingSet thresholded_ma_set(std::int64_t n, int dim, const std::map<LatticePoint, double>& coeffs,
                               double threshold, const RngStream& stream) {
  check_box_args(n, dim);
  if (coeffs.empty() || std::all_of(coeffs.begin(), coeffs.end(), [](const auto& c) { return c.second == 0.0; }))
    throw DegenerateError("thresholded moving average needs a nonzero coefficient");
  for (const auto& [l, a] : coeffs)
    if (l.dim() != dim) throw std::invalid_argument("coefficient lag dimension mismatch");

  // Innovations on the enlarged window [-n - r, n + r)^d.
  std::int64_t r = 0;
  for (const auto& [l, a] : coeffs) r = std::max(r, l.linf_norm());
  const LatticeBox window = LatticeBox::centered(n + r, dim);
  std::vector<double> z(window.volume());
  for (std::size_t i = 0; i < z.size(); ++i) {
    RngStream s = stream.at(window.point_at(i));
    std::normal_distribution<double> normal(0.0, 1.0);
    z[i] = normal(s);
  }
  std::vector<LatticePoint> kept;
  for (const auto& t : LatticeBox::centered(n, dim).points()) {
    double m = 0.0;
    for (const auto& [l, a] : coeffs) m += a * z[window.index_of(t - l)];
    if (m > threshold) kept.push_back(t);
  }
  return SamplingSet(dim, n, std::move(kept), ThresholdedMaProvenance{coeffs, threshold});
}

PairWeights::PairWeights(int dim, WeightSource source, double far, std::map<LatticePoint, double> exceptions)
    : dim_(dim), source_(source), far_(far), exceptions_(std::move(exceptions)) {}

bool PairWeights::complete() const noexcept { return !std::isnan(far_); }

double PairWeights::at(const LatticePoint& lag) const {
  auto it = exceptions_.find(lag);
  if (it != exceptions_.end()) return it->second;
  if (!complete()) throw DomainError("pair weight for lag " + lag.to_string() + " was not computed");
  return far_;
}

double PairWeights::max_weight() const noexcept {
  double m = complete() ? far_ : 0.0;
  for (const auto& [l, a] : exceptions_) m = std::max(m, a);
  return m;
}

namespace {

// Integer pair count over integer set size, so the result is the same
// double a brute-force count produces.
double box_weight(std::int64_t n, const LatticePoint& lag) {
  std::int64_t pairs = 1, size = 1;
  for (int i = 0; i < lag.dim(); ++i) {
    pairs *= std::max<std::int64_t>(2 * n - std::abs(lag[i]), 0);
    size *= 2 * n;
  }
  return static_cast<double>(pairs) / static_cast<double>(size);
}

double counted_weight(const SamplingSet& set, const LatticePoint& lag) {
  std::size_t c = 0;
  for (const auto& s : set.points()) c += set.contains(s + lag) ? 1 : 0;
  return static_cast<double>(c) / static_cast<double>(set.size());
}

}  // namespace

PairWeights pair_weights(const SamplingSet& set, std::span<const LatticePoint> lags) {
  if (set.empty()) throw DegenerateError("pair weights of an empty sampling set");
  const bool box = std::holds_alternative<BoxProvenance>(set.provenance());
  std::map<LatticePoint, double> a;
  for (const auto& lag : lags) {
    if (lag.dim() != set.dim()) throw std::invalid_argument("lag dimension mismatch");
    a[lag] = box ? box_weight(set.n(), lag) : counted_weight(set, lag);
  }
  return PairWeights(set.dim(), box ? WeightSource::exact : WeightSource::empirical,
                     std::numeric_limits<double>::quiet_NaN(), std::move(a));
}

PairWeights pair_weights(const SamplingSet& set) {
  if (set.empty()) throw DegenerateError("pair weights of an empty sampling set");
  const bool box = std::holds_alternative<BoxProvenance>(set.provenance());
  std::map<LatticePoint, double> a;
  for (const auto& lag : LatticeBox::centered(2 * set.n(), set.dim()).points()) {
    bool reachable = true;
    for (int i = 0; i < set.dim(); ++i) reachable = reachable && lag[i] > -2 * set.n();
    if (!reachable) continue;
    const double w = box ? box_weight(set.n(), lag) : counted_weight(set, lag);
    if (w != 0.0) a[lag] = w;
  }
  return PairWeights(set.dim(), box ? WeightSource::exact : WeightSource::empirical, 0.0, std::move(a));
}

double inclusion_probability(const Provenance& provenance) {
  if (std::holds_alternative<BoxProvenance>(provenance)) return 1.0;
  if (const auto* b = std::get_if<BernoulliProvenance>(&provenance)) return b->p;
  const auto& t = std::get<ThresholdedMaProvenance>(provenance);
  const double s0 = std::sqrt(ma_variance(t));
  if (s0 == 0.0) throw DegenerateError("thresholded moving average needs a nonzero coefficient");
  return numerics::normal_sf(t.threshold / s0);
}

PairWeights limit_weights(const Provenance& provenance, int dim) {
  const LatticePoint zero = LatticePoint::zero(dim);
  if (std::holds_alternative<BoxProvenance>(provenance)) return PairWeights(dim, WeightSource::exact, 1.0);
  if (const auto* b = std::get_if<BernoulliProvenance>(&provenance))
    return PairWeights(dim, WeightSource::analytic, b->p, {{zero, 1.0}});
  const auto* t = std::get_if<ThresholdedMaProvenance>(&provenance);
  if (!t) throw UnsupportedError("no limit weights for this provenance");
  const double var = ma_variance(*t);
  if (var == 0.0) throw DegenerateError("thresholded moving average needs a nonzero coefficient");
  const double h = t->threshold / std::sqrt(var);
  const double ey0 = numerics::normal_sf(h);
  if (!(ey0 > 0.0)) throw DegenerateError("P(M_0 > threshold) underflows to 0");
  std::map<LatticePoint, double> a;
  // M_0, M_l are independent unless l is a difference of two coefficient lags.
  for (const auto& [i, ai] : t->coeffs)
    for (const auto& [j, aj] : t->coeffs) {
      const LatticePoint l = i - j;
      if (a.count(l)) continue;
      const double rho = std::clamp(ma_autocov(*t, l) / var, -1.0, 1.0);
      a[l] = numerics::bivariate_normal_orthant(h, rho) / ey0;
    }
  return PairWeights(dim, WeightSource::analytic, ey0, std::move(a));
}

FolnerReport folner_diagnostics(std::span<const std::int64_t> n_sequence, std::span<const LatticePoint> shifts,
                                int dim) {
  FolnerReport report;
  for (std::int64_t n : n_sequence) {
    const SamplingSet g = box_set(n, dim);
    for (const auto& k : shifts) {
      if (k.dim() != dim) throw std::invalid_argument("shift dimension mismatch");
      std::size_t sym = 0;
      for (const auto& t : g.points()) {
        sym += g.contains(t + k) ? 0 : 1;  // (Gamma + k) \ Gamma, counted via t + k
        sym += g.contains(t - k) ? 0 : 1;  // Gamma \ (Gamma + k)
      }
      report.defects.push_back({n, k, static_cast<double>(sym) / static_cast<double>(g.size())});
    }
    // -Gamma_k + Gamma_n = [-n - k + 1, n + k)^d; the union over k < n is the k = n - 1 box.
    const double side = n >= 2 ? static_cast<double>(4 * n - 3) : 0.0;
    const double ratio = std::pow(side, dim) / static_cast<double>(g.size());
    report.tempered_ratios.push_back(ratio);
    report.tempered_constant = std::max(report.tempered_constant, ratio);
  }
  return report;
}

}  // namespace levyfield
