#include "levyfield/estimators.hpp"

#include <stdexcept>

#include "levyfield/errors.hpp"
#include "levyfield/summation.hpp"

namespace levyfield {

namespace {

void require_nonempty(const SamplingSet& set) {
  if (set.empty()) throw DomainError("estimator called on an empty sampling set");
}

double set_sum(const FieldSample& field, const SamplingSet& set) {
  PairwiseAccumulator acc;
  for (const auto& s : set.points()) acc.add(field.value(s));
  return acc.sum();
}

}  // namespace

double sample_mean(const FieldSample& field, const SamplingSet& set) {
  require_nonempty(set);
  return set_sum(field, set) / static_cast<double>(set.size());
}

AcovEstimate sample_acov(const FieldSample& field, const SamplingSet& set, std::span<const LatticePoint> lags) {
  require_nonempty(set);
  AcovEstimate out;
  out.set_size = set.size();
  for (const auto& lag : lags) {
    PairwiseAccumulator acc;
    for (const auto& s : set.points()) {
      const auto shifted = field.find(s + lag);
      if (!shifted)
        throw CoverageError("field sample lacks " + (s + lag).to_string() + " needed for lag " + lag.to_string());
      acc.add(field.value(s) * *shifted);
    }
    out.lags.push_back(lag);
    out.values.push_back(acc.sum() / static_cast<double>(set.size()));
  }
  return out;
}

double spde_mu_hat(const FieldSample& field, const SamplingSet& set, double levy_mean) {
  if (levy_mean == 0.0) throw DomainError("the estimator needs E L([0,1]^3) != 0");
  require_nonempty(set);
  const double sum = set_sum(field, set);
  if (sum == 0.0) throw DegenerateError("sum of the field over the sampling set is exactly 0");
  return levy_mean * static_cast<double>(set.size()) / sum;
}

}  // namespace levyfield
