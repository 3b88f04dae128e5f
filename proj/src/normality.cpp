#include "levyfield/normality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "levyfield/numerics.hpp"
#include "levyfield/summation.hpp"

namespace levyfield {

double kolmogorov_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 1.0 : -1.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

NormalitySummary normality_summary(std::span<const double> samples, double v_theory) {
  if (samples.size() < 30) throw std::invalid_argument("normality_summary needs at least 30 samples");
  NormalitySummary s;
  s.count = samples.size();
  s.v_theory = v_theory;
  const double n = static_cast<double>(samples.size());
  s.mean = pairwise_sum(samples) / n;
  PairwiseAccumulator a2, a3, a4;
  for (double x : samples) {
    const double d = x - s.mean;
    a2.add(d * d);
    a3.add(d * d * d);
    a4.add(d * d * d * d);
  }
  const double m2 = a2.sum() / n;
  s.variance = a2.sum() / (n - 1.0);
  if (!(m2 > 0.0)) {
    s.degenerate = true;
    s.ks_statistic = s.ks_pvalue = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  s.skewness = (a3.sum() / n) / std::pow(m2, 1.5);
  s.excess_kurtosis = (a4.sum() / n) / (m2 * m2) - 3.0;
  if (!(v_theory > 0.0)) throw std::invalid_argument("normality_summary needs v_theory > 0");

  std::vector<double> z(samples.begin(), samples.end());
  std::sort(z.begin(), z.end());
  const double sd = std::sqrt(v_theory);
  double dmax = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double F = numerics::normal_cdf(z[i] / sd);
    dmax = std::max({dmax, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
  }
  s.ks_statistic = dmax;
  s.ks_pvalue = kolmogorov_pvalue(dmax, samples.size());
  return s;
}

std::vector<std::vector<double>> sample_covariance(const std::vector<std::vector<double>>& rows) {
  if (rows.size() < 2) throw std::invalid_argument("sample_covariance needs at least two rows");
  const std::size_t m = rows.front().size();
  const double n = static_cast<double>(rows.size());
  std::vector<double> mean(m);
  for (std::size_t j = 0; j < m; ++j) {
    PairwiseAccumulator acc;
    for (const auto& r : rows) acc.add(r.at(j));
    mean[j] = acc.sum() / n;
  }
  std::vector<std::vector<double>> c(m, std::vector<double>(m));
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = p; q < m; ++q) {
      PairwiseAccumulator acc;
      for (const auto& r : rows) acc.add((r[p] - mean[p]) * (r[q] - mean[q]));
      c[p][q] = c[q][p] = acc.sum() / (n - 1.0);
    }
  return c;
}

}  // namespace levyfield
