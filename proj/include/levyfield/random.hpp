#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "levyfield/lattice.hpp"

namespace levyfield {

/// Counter-based random stream (Philox4x32-10). A stream is a pure function
/// of its 64-bit key and a 64-bit position counter, so child streams derived
/// from (key, index) or (key, lattice point) are reproducible regardless of
/// the order in which they are consumed. Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed = 0) noexcept;

  /// Independent child stream for an integer index (replicate, purpose tag).
  RngStream derive(std::uint64_t index) const noexcept;
  /// Independent child stream attached to a lattice point.
  RngStream at(const LatticePoint& p) const noexcept;

  result_type operator()() noexcept;
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t position() const noexcept { return counter_; }

 private:
  RngStream(std::uint64_t key, int) noexcept : key_(key) {}

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

/// One Philox4x32-10 block: encrypts a 128-bit counter under a 64-bit key.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::uint64_t key) noexcept;

}  // namespace levyfield
