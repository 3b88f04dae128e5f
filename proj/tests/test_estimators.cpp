#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "levyfield/errors.hpp"
#include "levyfield/estimators.hpp"
#include "levyfield/quadrature.hpp"

using namespace levyfield;

namespace {

FieldSample constant_field(const std::vector<LatticePoint>& pts, double c) {
  return FieldSample(pts, std::vector<double>(pts.size(), c));
}

}  // namespace

TEST_CASE("constant field") {
  auto set = box_set(3, 2);
  const std::vector<LatticePoint> lags{LatticePoint{0, 0}, LatticePoint{1, 0}, LatticePoint{-1, 2}};
  auto cover = lagged_cover(set.points(), lags);
  auto x = constant_field(cover, -1.25);
  CHECK(sample_mean(x, set) == -1.25);
  auto a = sample_acov(x, set, lags);
  CHECK(a.set_size == set.size());
  for (double v : a.values) CHECK(v == 1.5625);
}

TEST_CASE("sample mean is linear and matches a long double sum") {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> n01;
  auto set = box_set(50000, 1);
  std::vector<double> xv(set.size()), zv(set.size());
  for (auto& v : xv) v = n01(gen) + 3.0;
  for (auto& v : zv) v = n01(gen);
  std::vector<LatticePoint> pts(set.points().begin(), set.points().end());
  FieldSample x(pts, xv), z(pts, zv);
  std::vector<double> comb(xv.size());
  for (std::size_t i = 0; i < comb.size(); ++i) comb[i] = 2.0 * xv[i] - 0.5 * zv[i];
  FieldSample c(pts, comb);
  CHECK(sample_mean(c, set) ==
        doctest::Approx(2.0 * sample_mean(x, set) - 0.5 * sample_mean(z, set)).epsilon(1e-13));
  long double ref = 0.0L;
  for (double v : xv) ref += v;
  ref /= static_cast<long double>(xv.size());
  CHECK(std::abs(sample_mean(x, set) - static_cast<double>(ref)) <= 1e-12 * std::abs(static_cast<double>(ref)));
}

TEST_CASE("lag zero is a mean of squares") {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> n01;
  auto set = box_set(20, 1);
  std::vector<LatticePoint> pts(set.points().begin(), set.points().end());
  std::vector<double> v(pts.size());
  double ss = 0.0;
  for (auto& x : v) {
    x = n01(gen);
    ss += x * x;
  }
  FieldSample f(pts, v);
  const std::vector<LatticePoint> zero{LatticePoint{0}};
  auto a = sample_acov(f, set, zero);
  CHECK(a.values[0] >= 0.0);
  CHECK(a.values[0] == doctest::Approx(ss / v.size()).epsilon(1e-14));
}

TEST_CASE("reversed lag on the shifted set") {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> n01;
  auto set = box_set(6, 2);
  const LatticePoint d{2, -1};
  const std::vector<LatticePoint> lag{d}, back{-d};
  auto cover = lagged_cover(set.points(), lag);
  std::vector<double> v(cover.size());
  for (auto& x : v) x = n01(gen);
  FieldSample f(cover, v);
  std::vector<LatticePoint> shifted;
  for (const auto& p : set.points()) shifted.push_back(p + d);
  SamplingSet moved(2, 8, canonical(shifted), BoxProvenance{});
  const double fwd = sample_acov(f, set, lag).values[0];
  const double rev = sample_acov(f, moved, back).values[0];
  CHECK(fwd == doctest::Approx(rev).epsilon(1e-14));
}

TEST_CASE("autocovariance estimator is unbiased") {
  QuadratureSpec q{0.25, 2.0};
  auto f = box_kernel(1);
  auto set = box_set(4, 1);
  const std::vector<LatticePoint> lags{LatticePoint{0}, LatticePoint{1}};
  Simulator sim(f, LevyTriplet::gaussian(1.0), lagged_cover(set.points(), lags), q);
  RngStream root(4);
  std::vector<double> g0, g1;
  for (std::uint64_t r = 0; r < 10000; ++r) {
    auto s = root.derive(r);
    auto x = sim.run(s);
    auto a = sample_acov(x, set, lags);
    g0.push_back(a.values[0]);
    g1.push_back(a.values[1]);
  }
  auto check = [](const std::vector<double>& v, double target) {
    double m = 0.0, s2 = 0.0;
    for (double x : v) m += x;
    m /= v.size();
    for (double x : v) s2 += (x - m) * (x - m);
    s2 /= v.size() - 1;
    CHECK(std::abs(m - target) < 3.0 * std::sqrt(s2 / v.size()));
  };
  check(g0, lag_covariance(f, 1.0, lags[0], q));
  check(g1, lag_covariance(f, 1.0, lags[1], q));
}

TEST_CASE("error paths") {
  auto set = box_set(2, 1);
  auto x = constant_field(std::vector<LatticePoint>(set.points().begin(), set.points().end()), 1.0);
  const std::vector<LatticePoint> lag{LatticePoint{1}};
  CHECK_THROWS_AS(sample_acov(x, set, lag), CoverageError);
  SamplingSet empty(1, 2, {}, BoxProvenance{});
  CHECK_THROWS_AS(sample_mean(x, empty), DomainError);
}

TEST_CASE("spde estimator") {
  auto set = box_set(2, 3);
  std::vector<LatticePoint> pts(set.points().begin(), set.points().end());
  // X = levy_mean / mu reproduces mu
  CHECK(spde_mu_hat(constant_field(pts, 2.0 / 0.5), set, 2.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(spde_mu_hat(constant_field(pts, 0.0), set, 1.0), DegenerateError);
  CHECK_THROWS_AS(spde_mu_hat(constant_field(pts, 1.0), set, 0.0), DomainError);
}
