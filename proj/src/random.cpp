#include "levyfield/random.hpp"

namespace levyfield {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

// Domain-separation tags for the two kinds of derivation.
constexpr std::uint32_t kDeriveTag = 0x5EED0001u;
constexpr std::uint32_t kPointTag = 0x5EED0002u;

std::uint64_t fold_key(std::uint64_t key, std::uint64_t value, std::uint32_t tag,
                       std::uint32_t extra) noexcept {
  const auto out = philox4x32({static_cast<std::uint32_t>(value),
                               static_cast<std::uint32_t>(value >> 32), tag, extra},
                              key);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::uint64_t key) noexcept {
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return ctr;
}

RngStream::RngStream(std::uint64_t seed) noexcept : key_(fold_key(0x243F6A8885A308D3ull, seed, 0, 0)) {}

RngStream RngStream::derive(std::uint64_t index) const noexcept {
  return RngStream(fold_key(key_, index, kDeriveTag, 0), 0);
}

RngStream RngStream::at(const LatticePoint& p) const noexcept {
  std::uint64_t k = key_;
  for (int i = 0; i < p.dim(); ++i)
    k = fold_key(k, static_cast<std::uint64_t>(p[i]), kPointTag, static_cast<std::uint32_t>(i));
  return RngStream(k, 0);
}

RngStream::result_type RngStream::operator()() noexcept {
  if (buffered_ == 0) {
    const auto out = philox4x32({static_cast<std::uint32_t>(counter_),
                                 static_cast<std::uint32_t>(counter_ >> 32), 0u, 0u},
                                key_);
    ++counter_;
    buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    buffered_ = 2;
  }
  return buffer_[static_cast<std::size_t>(--buffered_)];
}

double RngStream::uniform() noexcept {
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  return (static_cast<double>((*this)() >> 11) + 0.5) * kScale;
}

}  // namespace levyfield
