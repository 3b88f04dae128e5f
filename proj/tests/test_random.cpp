#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "levyfield/random.hpp"

using namespace levyfield;

// Known-answer vectors for Philox4x32-10 (Random123 kat_vectors).
TEST_CASE("philox known answers") {
  using A = std::array<std::uint32_t, 4>;
  CHECK(philox4x32(A{0, 0, 0, 0}, 0) == A{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(philox4x32(A{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, 0xffffffffffffffffull) ==
        A{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(philox4x32(A{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, 0x299f31d0a4093822ull) ==
        A{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are reproducible") {
  RngStream a(42), b(42), c(43);
  for (int i = 0; i < 10; ++i) {
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
  }
  CHECK(a.derive(7).key() == b.derive(7).key());
  CHECK(a.derive(7).key() != a.derive(8).key());
  CHECK(a.at(LatticePoint{1, 2}).key() == RngStream(42).at(LatticePoint{1, 2}).key());
  CHECK(a.at(LatticePoint{1, 2}).key() != a.at(LatticePoint{2, 1}).key());
  // point streams do not depend on how much the parent has consumed
  RngStream fresh(42);
  CHECK(fresh.at(LatticePoint{0}).key() == a.at(LatticePoint{0}).key());
}

TEST_CASE("derived keys are distinct") {
  RngStream root(1);
  std::set<std::uint64_t> keys;
  for (std::uint64_t i = 0; i < 2000; ++i) keys.insert(root.derive(i).key());
  for (std::int64_t x = -20; x < 20; ++x)
    for (std::int64_t y = -20; y < 20; ++y) keys.insert(root.at(LatticePoint{x, y}).key());
  CHECK(keys.size() == 2000 + 1600);
}

TEST_CASE("uniform moments") {
  RngStream s(9);
  const int n = 200000;
  double m1 = 0.0, m2 = 0.0, lo = 1.0, hi = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    m1 += u;
    m2 += u * u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  m1 /= n;
  m2 /= n;
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(std::abs(m1 - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n) + 1e-12);
  CHECK(std::abs(m2 - 1.0 / 3.0) < 4.0 * std::sqrt(4.0 / 45.0 / n));
}

TEST_CASE("lag-one correlation of uniforms is small") {
  RngStream s(11);
  const int n = 100000;
  double prev = s.uniform() - 0.5, acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform() - 0.5;
    acc += u * prev;
    prev = u;
  }
  const double rho = acc / n * 12.0;
  CHECK(std::abs(rho) < 4.0 / std::sqrt(static_cast<double>(n)));
}
