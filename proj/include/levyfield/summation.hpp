#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace levyfield {

/// Pairwise (cascade) summation; result depends only on the order of the
/// input, never on how the caller partitions work.
double pairwise_sum(std::span<const double> values) noexcept;

/// Streaming form of pairwise_sum: add() values in canonical order and read
/// sum(). Produces bit-identical results to pairwise_sum over the same
/// sequence.
class PairwiseAccumulator {
 public:
  void add(double x);
  double sum() const noexcept;
  std::size_t count() const noexcept { return count_; }

 private:
  static constexpr std::size_t kBlock = 64;

  void push_block(double s);

  double block_[kBlock] = {};
  std::size_t in_block_ = 0;
  std::size_t count_ = 0;
  // levels_[i] holds a partial sum over 2^i full blocks, or is unused.
  std::vector<double> levels_;
  std::vector<bool> used_;
};

}  // namespace levyfield
