#include "levyfield/summation.hpp"

namespace levyfield {

double pairwise_sum(std::span<const double> values) noexcept {
  PairwiseAccumulator acc;
  for (double v : values) acc.add(v);
  return acc.sum();
}

void PairwiseAccumulator::add(double x) {
  block_[in_block_++] = x;
  ++count_;
  if (in_block_ == kBlock) {
    double s = 0.0;
    for (double v : block_) s += v;
    in_block_ = 0;
    push_block(s);
  }
}

void PairwiseAccumulator::push_block(double s) {
  std::size_t level = 0;
  while (level < levels_.size() && used_[level]) {
    s = levels_[level] + s;
    used_[level] = false;
    ++level;
  }
  if (level == levels_.size()) {
    levels_.push_back(0.0);
    used_.push_back(false);
  }
  levels_[level] = s;
  used_[level] = true;
}

double PairwiseAccumulator::sum() const noexcept {
  double total = 0.0;
  for (std::size_t i = 0; i < in_block_; ++i) total += block_[i];
  for (std::size_t level = 0; level < levels_.size(); ++level)
    if (used_[level]) total = levels_[level] + total;
  return total;
}

}  // namespace levyfield
