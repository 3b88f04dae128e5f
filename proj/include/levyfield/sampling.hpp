#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "levyfield/lattice.hpp"
#include "levyfield/random.hpp"

namespace levyfield {

struct BoxProvenance {};

struct BernoulliProvenance {
  double p = 0.5;
};

/// Y_t = 1{M_t > threshold}, M_t = sum_l coeffs[l] Z_{t-l}, Z i.i.d. N(0, 1).
struct ThresholdedMaProvenance {
  std::map<LatticePoint, double> coeffs;
  double threshold = 0.0;
};

using Provenance = std::variant<BoxProvenance, BernoulliProvenance, ThresholdedMaProvenance>;

std::string provenance_name(const Provenance& p);

/// Finite Gamma_n ⊂ [-n, n)^d, points in lexicographic order.
class SamplingSet {
 public:
  SamplingSet(int dim, std::int64_t n, std::vector<LatticePoint> points, Provenance provenance);

  int dim() const noexcept { return dim_; }
  std::int64_t n() const noexcept { return n_; }
  std::span<const LatticePoint> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const Provenance& provenance() const noexcept { return provenance_; }
  bool contains(const LatticePoint& p) const noexcept { return index_.contains(p); }

 private:
  int dim_;
  std::int64_t n_;
  std::vector<LatticePoint> points_;
  Provenance provenance_;
  LatticeIndex index_;
};

/// [-n, n)^d ∩ Z^d.
SamplingSet box_set(std::int64_t n, int dim);

/// Each point of [-n, n)^d kept with probability p. The coin of t is drawn
/// from stream.at(t), so the sets are nested in n for a fixed stream.
SamplingSet bernoulli_set(std::int64_t n, int dim, double p, const RngStream& stream);

/// Gamma_n = {t in [-n, n)^d : M_t > threshold}; the innovation Z_t is drawn
/// from stream.at(t).
SamplingSet thresholded_ma_set(std::int64_t n, int dim, const std::map<LatticePoint, double>& coeffs,
                               double threshold, const RngStream& stream);

enum class WeightSource { exact, analytic, empirical };

/// Pair weights l -> a_l stored as a value `far` for all lags plus a finite
/// map of exceptions. A NaN far value means only the listed lags are known.
class PairWeights {
 public:
  PairWeights(int dim, WeightSource source, double far, std::map<LatticePoint, double> exceptions = {});

  int dim() const noexcept { return dim_; }
  WeightSource source() const noexcept { return source_; }
  double far() const noexcept { return far_; }
  bool complete() const noexcept;
  const std::map<LatticePoint, double>& exceptions() const noexcept { return exceptions_; }
  /// Throws DomainError for an unlisted lag of an incomplete map.
  double at(const LatticePoint& lag) const;
  /// sup_l a_l.
  double max_weight() const noexcept;

 private:
  int dim_;
  WeightSource source_;
  double far_;
  std::map<LatticePoint, double> exceptions_;
};

/// a_l^n = #{s in Gamma_n : s + l in Gamma_n} / |Gamma_n| for the listed lags.
PairWeights pair_weights(const SamplingSet& set, std::span<const LatticePoint> lags);
/// Every lag: exceptions hold the nonzero a_l^n, far = 0.
PairWeights pair_weights(const SamplingSet& set);

/// n -> infinity limit of a_l^n for the provenance.
PairWeights limit_weights(const Provenance& provenance, int dim);

/// P(Y_0 = 1) of the provenance.
double inclusion_probability(const Provenance& provenance);

struct FolnerDefect {
  std::int64_t n;
  LatticePoint shift;
  double defect;  ///< |(Gamma_n + k) Δ Gamma_n| / |Gamma_n|
};

struct FolnerReport {
  std::vector<FolnerDefect> defects;
  /// max_n |⋃_{1 <= k < n} (-Gamma_k + Gamma_n)| / |Gamma_n|.
  double tempered_constant = 0.0;
  std::vector<double> tempered_ratios;  ///< per n
};

FolnerReport folner_diagnostics(std::span<const std::int64_t> n_sequence, std::span<const LatticePoint> shifts,
                                int dim);

}  // namespace levyfield
