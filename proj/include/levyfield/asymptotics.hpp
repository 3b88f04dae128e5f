#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "levyfield/kernels.hpp"
#include "levyfield/levy_basis.hpp"
#include "levyfield/quadrature.hpp"
#include "levyfield/sampling.hpp"

namespace levyfield {

/// Which pairing of the gamma_X products enters v_pq.
///   standard: gamma(l) gamma(l + Dq - Dp) + gamma(l + Dq) gamma(l - Dp)
///   swapped:  gamma(l) gamma(l + Dp - Dq) + gamma(l + Dp) gamma(l + Dq)
enum class PairingForm { standard, swapped };

struct LagTerm {
  LatticePoint lag;
  double value;
};

struct AvarResult {
  double value = 0.0;                       ///< scalar results
  std::vector<std::vector<double>> matrix;  ///< m x m results
  std::int64_t truncation_radius = 0;
  double tail_bound = 0.0;
  std::vector<LagTerm> term_breakdown;
};

/// Lattice sums of G(l) = int f(v) f(v + l) dv on the quadrature grid,
/// streamed one sub-offset slice at a time.
struct LatticeGram {
  double complete_sum = 0.0;                 ///< sum over all l in Z^d
  std::map<LatticePoint, double> lag_values; ///< G(l) for the requested lags
  std::vector<double> box_sums;              ///< sum_l a_l^n G(l), box Gamma_n, per requested n
  double unit_cell_norm_sum = 0.0;           ///< sum over unit cells Q of ||f||_{L2(Q)}
};

LatticeGram lattice_gram(const Kernel& f, const QuadratureSpec& quad, std::span<const LatticePoint> lags = {},
                         std::span<const std::int64_t> box_n = {});

/// sum_{l in Z^d} a_l gamma_X(l), with gamma_X(l) = sigma2 G(l). The sum
/// runs over every lag the window supports; tail_bound covers the mass of f
/// outside the window. term_breakdown lists a_l gamma_X(l) for
/// ||l||_inf <= breakdown_radius.
AvarResult mean_avar(const Kernel& f, double sigma2, const PairWeights& weights, const QuadratureSpec& quad,
                     std::int64_t breakdown_radius = 1);

/// Finite-n variance Var(sum_{t in Gamma_n} X_t) / |Gamma_n| for boxes,
/// i.e. the weights a_l^n = prod_i (1 - |l_i| / 2n)_+. One result per n.
std::vector<AvarResult> box_mean_var(const Kernel& f, double sigma2, std::span<const std::int64_t> n,
                                     const QuadratureSpec& quad);

/// Covariance matrix V of the normalised sample autocovariances.
AvarResult acov_avar(const Kernel& f, const LevyTriplet& triplet, std::span<const LatticePoint> lags,
                     const PairWeights& weights, const QuadratureSpec& quad,
                     PairingForm form = PairingForm::standard, double rel_tol = 1e-6);

/// Limit of |Gamma_n| cov(gamma*_n(Dp), gamma*_n(Dq)); same code path as acov_avar.
double acov_cov_limit(const Kernel& f, const LevyTriplet& triplet, const LatticePoint& dp, const LatticePoint& dq,
                      const PairWeights& weights, const QuadratureSpec& quad,
                      PairingForm form = PairingForm::standard, double rel_tol = 1e-6);

/// E prod_i int f_i(-u) dL(u) for a centred basis:
/// (eta - 3) sigma^4 int f1 f2 f3 f4 + sigma^4 (<f1,f2><f3,f4> + <f1,f3><f2,f4> + <f1,f4><f2,f3>).
double fourth_moment(const Kernel& f1, const Kernel& f2, const Kernel& f3, const Kernel& f4,
                     const LevyTriplet& triplet, const QuadratureSpec& quad);

struct SummabilityReport {
  std::vector<std::int64_t> radii;
  std::vector<double> partial_sums;  ///< sum_{||l||_inf <= R} a_l int |f(v) f(v + l)| dv
  std::vector<double> tail_bounds;   ///< bound on the rest of the series
  double epsilon = 0.0;
  double weighted_norm = 0.0;        ///< || f exp(epsilon ||.||) ||_2^2
  double plateau_ratio = 0.0;        ///< relative increment of the last two partial sums
};

/// Partial sums of the summability series with the weighted-L2 tail bound
/// sum_{||l|| > R} exp(-epsilon ||l||) || f exp(epsilon ||.||) ||_2^2.
/// epsilon defaults to half the decay rate.
SummabilityReport summability_diagnostic(const Kernel& f, const PairWeights& weights, const QuadratureSpec& quad,
                                         std::span<const std::int64_t> radii,
                                         std::optional<double> epsilon = std::nullopt);

}  // namespace levyfield
