#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "levyfield/field_sim.hpp"
#include "levyfield/sampling.hpp"

namespace levyfield {

struct AcovEstimate {
  std::vector<LatticePoint> lags;
  std::vector<double> values;  ///< values[i] = gamma*_n(lags[i])
  std::size_t set_size = 0;
};

/// (1/|Gamma_n|) sum_{s in Gamma_n} X_s.
double sample_mean(const FieldSample& field, const SamplingSet& set);

/// gamma*_n(D) = (1/|Gamma_n|) sum_{s in Gamma_n} X_s X_{s+D}, no mean correction.
AcovEstimate sample_acov(const FieldSample& field, const SamplingSet& set, std::span<const LatticePoint> lags);

/// levy_mean |Gamma_n| / sum_{k in Gamma_n} X(k).
double spde_mu_hat(const FieldSample& field, const SamplingSet& set, double levy_mean);

}  // namespace levyfield
