#include <doctest.h>

#include <cmath>
#include <vector>

#include "levyfield/errors.hpp"
#include "levyfield/kernels.hpp"
#include "levyfield/quadrature.hpp"

using namespace levyfield;

namespace {

// int_0^1 (sum_t exp(-|u + t|))^2 du in closed form.
double exp_periodization_1d() {
  const double e1 = std::exp(-1.0);
  return (1.0 - e1 * e1 + 2.0 * e1) / ((1.0 - e1) * (1.0 - e1));
}

Kernel bump_on_unit_interval() {
  Kernel k(1, [](std::span<const double> x) { return (x[0] >= 0.0 && x[0] < 1.0) ? x[0] * (1.0 - x[0]) : 0.0; },
           "bump");
  SupportBox b = SupportBox::unbounded();
  b.lo[0] = 0.0;
  b.hi[0] = 1.0;
  k.set_support(b);
  return k;
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK_NOTHROW(QuadratureSpec{0.25, 3.0}.validate());
  CHECK_THROWS(QuadratureSpec{0.3, 3.0}.validate());
  CHECK_THROWS(QuadratureSpec{0.25, 3.1}.validate());
  CHECK_THROWS(QuadratureSpec{0.25, 0.0}.validate());
  CHECK(QuadratureSpec{0.0625, 4.0}.cells_per_unit() == 16);
  CHECK(QuadratureSpec{0.0625, 4.0}.halfwidth_cells() == 64);
  CHECK(QuadratureSpec{0.5, 4.0}.cell_volume(3) == 0.125);
}

TEST_CASE("box inner product is exact") {
  for (int d = 1; d <= 3; ++d) {
    for (double delta : {1.0, 0.25, 0.0625}) {
      if (d == 3 && delta < 0.1) continue;
      auto r = inner_product(box_kernel(d), box_kernel(d), {delta, 4.0});
      CHECK(r.value == 1.0);
      CHECK(r.tail_bound == 0.0);
    }
  }
  auto a = indicator_kernel(std::vector<double>{0.0}, std::vector<double>{1.0});
  auto b = indicator_kernel(std::vector<double>{2.0}, std::vector<double>{3.0});
  CHECK(inner_product(a, b, {0.25, 4.0}).value == 0.0);
}

TEST_CASE("exponential inner product") {
  auto e = exp_kernel(1);
  auto r = inner_product(e, e, {1.0 / 64, 16.0});
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.tail_bound > 0.0);
  CHECK(r.tail_bound < 1e-12);
  auto g = gauss_kernel(2, 1.0);
  // int exp(-|x|^2) over R^2 = pi
  CHECK(inner_product(g, g, {1.0 / 16, 8.0}).value == doctest::Approx(M_PI).epsilon(1e-6));
}

TEST_CASE("inner product symmetric and bilinear") {
  QuadratureSpec q{1.0 / 16, 8.0};
  auto f = exp_kernel(1, 1.3), g = gauss_kernel(1, 0.7), h = box_kernel(1);
  CHECK(inner_product(f, g, q).value == doctest::Approx(inner_product(g, f, q).value).epsilon(1e-14));
  CHECK(inner_product(f.scaled(2.5), g, q).value == doctest::Approx(2.5 * inner_product(f, g, q).value).epsilon(1e-14));
  std::vector<Kernel> trip{f, g, h};
  CHECK(integrate_product(trip, q).value > 0.0);
}

TEST_CASE("lag covariance") {
  QuadratureSpec q{1.0 / 16, 6.0};
  for (int d = 1; d <= 2; ++d) {
    auto b = box_kernel(d);
    CHECK(lag_covariance(b, 1.0, LatticePoint::zero(d), q) == 1.0);
    for (const auto& l : LatticeBox::centered(2, d).points())
      if (!l.is_zero()) CHECK(lag_covariance(b, 1.0, l, q) == 0.0);
  }
  QuadratureSpec fine{1.0 / 64, 16.0};
  auto e = exp_kernel(1);
  CHECK(lag_covariance(e, 1.0, LatticePoint{1}, fine) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-3));
  CHECK(lag_covariance(e, 2.0, LatticePoint{3}, fine) == doctest::Approx(2.0 * 4.0 * std::exp(-3.0)).epsilon(1e-3));
  auto g = gauss_kernel(2, 0.8);
  for (const auto& l : LatticeBox::centered(2, 2).points())
    CHECK(lag_covariance(g, 1.0, l, q) == doctest::Approx(lag_covariance(g, 1.0, -l, q)).epsilon(1e-12));
}

TEST_CASE("sampled kernel products") {
  QuadratureSpec q{1.0 / 16, 8.0};
  auto e = exp_kernel(1);
  SampledKernel s(e, q);
  CHECK(s.integral() == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(s.max_abs() <= 1.0);
  for (std::int64_t l = -3; l <= 3; ++l)
    CHECK(SampledKernel::lag_product(s, s, LatticePoint{l}) ==
          doctest::Approx(lag_covariance(e, 1.0, LatticePoint{l}, q)).epsilon(1e-5));
  const SampledKernel* f4[] = {&s, &s, &s, &s};
  const LatticePoint shifts[] = {LatticePoint{0}, LatticePoint{0}, LatticePoint{0}, LatticePoint{0}};
  // int exp(-4|x|) = 1/2
  CHECK(SampledKernel::shifted_product(f4, shifts) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("shifted products at integer lags") {
  QuadratureSpec q{0.25, 4.0};
  auto g = gauss_kernel(2, 0.6);
  SampledKernel s(g, q);
  const SampledKernel* f[] = {&s, &s};
  const LatticePoint l{1, -1};
  const LatticePoint shifts[] = {LatticePoint{0, 0}, l};
  CHECK(SampledKernel::shifted_product(f, shifts) == doctest::Approx(SampledKernel::lag_product(s, s, l)).epsilon(1e-13));
}

TEST_CASE("sub-offset slices reproduce the sampled grid") {
  QuadratureSpec q{0.25, 4.0};
  for (int d = 1; d <= 2; ++d) {
    auto f = indicator_kernel(std::vector<double>(d, -1.25), std::vector<double>(d, 0.75)).scaled(1.5);
    SampledKernel s(f, q);
    SubOffsetSlices slices(f, q);
    CHECK(slices.count() == static_cast<std::size_t>(std::pow(4, d)));
    double total = 0.0;
    std::vector<double> buf(slices.offsets().volume());
    for (std::size_t si = 0; si < slices.count(); ++si) {
      slices.fill(si, buf);
      const LatticePoint sub = slices.suboffset(si);
      for (std::size_t j = 0; j < buf.size(); ++j) {
        LatticePoint cell = slices.offsets().point_at(j);
        for (int i = 0; i < d; ++i) cell[i] = cell[i] * 4 + sub[i];
        CHECK(buf[j] == s.at(cell));
        total += buf[j];
      }
    }
    CHECK(total * s.cell_volume() == doctest::Approx(1.5 * std::pow(2.0, d)));
  }
}

TEST_CASE("periodization norm") {
  QuadratureSpec q{1.0 / 64, 16.0};
  auto bump = bump_on_unit_interval();
  CHECK(periodization_norm(bump, q).value == doctest::Approx(inner_product(bump, bump, q).value).epsilon(1e-13));
  CHECK(periodization_norm(box_kernel(1), q).value == doctest::Approx(1.0));
  CHECK(periodization_norm(box_kernel(2), {0.125, 4.0}).value == doctest::Approx(1.0));
  auto e = exp_kernel(1);
  auto p = periodization_norm(e, q);
  CHECK(p.value == doctest::Approx(exp_periodization_1d()).epsilon(1e-3));
  CHECK(p.tail_bound < 1e-10);
  CHECK(lattice_overlap_sum(e, q, 15) == doctest::Approx(exp_periodization_1d()).epsilon(1e-3));
}

TEST_CASE("certified lattice radius bounds the tail") {
  auto e = exp_kernel(1);
  const auto t1 = certified_lattice_radius(e, 1e-3);
  const auto t2 = certified_lattice_radius(e, 1e-9);
  CHECK(t2 > t1);
  // sup over [0,1) of exp(-|u + t|) for |t| > T, summed
  double rest = 0.0;
  for (std::int64_t t = t1 + 1; t < 200; ++t) rest += 2.0 * std::exp(-(t - 1.0));
  CHECK(rest <= 1e-3);
  CHECK(certified_lattice_radius(box_kernel(1), 1e-9) >= 1);
  Kernel bare(1, [](std::span<const double>) { return 1.0; }, "flat");
  CHECK_THROWS_AS(certified_lattice_radius(bare, 1e-3), UnsupportedError);
}
