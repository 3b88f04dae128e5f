#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace levyfield {

struct NormalitySummary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  bool degenerate = false;  ///< zero spread; no KS test
  double ks_statistic = 0.0;
  double ks_pvalue = 0.0;
  double v_theory = 0.0;
};

/// Moments plus the one-sample KS test against N(0, v_theory).
NormalitySummary normality_summary(std::span<const double> samples, double v_theory);

/// Asymptotic KS p-value P(D_n > d) with the (sqrt n + 0.12 + 0.11/sqrt n) correction.
double kolmogorov_pvalue(double d, std::size_t n);

/// Unbiased covariance matrix of row vectors (rows = replicates).
std::vector<std::vector<double>> sample_covariance(const std::vector<std::vector<double>>& rows);

}  // namespace levyfield
