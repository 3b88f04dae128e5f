#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "levyfield/normality.hpp"

using namespace levyfield;

TEST_CASE("kolmogorov p-values") {
  // asymptotic 5% and 1% points of the Kolmogorov distribution
  const std::size_t n = 100000;
  const double c = std::sqrt(static_cast<double>(n)) + 0.12 + 0.11 / std::sqrt(static_cast<double>(n));
  CHECK(kolmogorov_pvalue(1.3581 / c, n) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_pvalue(1.6276 / c, n) == doctest::Approx(0.01).epsilon(1e-3));
  CHECK(kolmogorov_pvalue(0.0, n) == 1.0);
  CHECK(kolmogorov_pvalue(1.0, n) < 1e-100);
}

TEST_CASE("standard normal self-test over 100 seeds") {
  int ks_ok = 0, skew_ok = 0, kurt_ok = 0;
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 gen(1000 + seed);
    std::normal_distribution<double> n01;
    std::vector<double> x(10000);
    for (auto& v : x) v = n01(gen);
    auto s = normality_summary(x, 1.0);
    CHECK_FALSE(s.degenerate);
    ks_ok += s.ks_pvalue > 0.01;
    skew_ok += std::abs(s.skewness) < 0.05;
    kurt_ok += std::abs(s.excess_kurtosis) < 0.1;
  }
  CHECK(ks_ok >= 95);
  // 0.05 and 0.1 sit about two standard errors out at n = 10^4
  CHECK(skew_ok >= 90);
  CHECK(kurt_ok >= 90);
}

TEST_CASE("wrong variance is detected") {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> n01;
  std::vector<double> x(10000);
  for (auto& v : x) v = 1.2 * n01(gen);
  CHECK(normality_summary(x, 1.0).ks_pvalue < 1e-6);
}

TEST_CASE("moments of a known sample") {
  std::vector<double> x(40);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (i % 2 == 0) ? 1.0 : -1.0;
  auto s = normality_summary(x, 1.0);
  CHECK(s.count == 40);
  CHECK(s.mean == doctest::Approx(0.0));
  CHECK(s.variance == doctest::Approx(40.0 / 39.0));
  CHECK(s.skewness == doctest::Approx(0.0));
  CHECK(s.excess_kurtosis == doctest::Approx(-2.0));
  CHECK(s.ks_statistic == doctest::Approx(0.5 - (1.0 - 0.8413447460685429)).epsilon(1e-9));
}

TEST_CASE("degenerate and invalid input") {
  std::vector<double> c(50, 3.0);
  auto s = normality_summary(c, 1.0);
  CHECK(s.degenerate);
  CHECK(std::isnan(s.ks_pvalue));
  CHECK_THROWS_AS(normality_summary(std::vector<double>(10, 1.0), 1.0), std::invalid_argument);
  std::vector<double> x{1, 2, 3};
  x.resize(40, 0.5);
  CHECK_THROWS_AS(normality_summary(x, 0.0), std::invalid_argument);
}

TEST_CASE("matched scaling leaves KS unchanged") {
  std::mt19937_64 gen(9);
  std::normal_distribution<double> n01;
  std::vector<double> x(500), y(500);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = n01(gen);
    y[i] = 4.0 * x[i];
  }
  auto a = normality_summary(x, 1.3), b = normality_summary(y, 1.3 * 16.0);
  CHECK(a.ks_statistic == doctest::Approx(b.ks_statistic).epsilon(1e-12));
  CHECK(a.ks_pvalue == doctest::Approx(b.ks_pvalue).epsilon(1e-10));
}

TEST_CASE("sample covariance") {
  std::vector<std::vector<double>> rows{{1, 2}, {2, 4}, {3, 7}, {4, 7}};
  auto c = sample_covariance(rows);
  // means 2.5, 5
  CHECK(c[0][0] == doctest::Approx(5.0 / 3.0));
  CHECK(c[1][1] == doctest::Approx(18.0 / 3.0));
  CHECK(c[0][1] == doctest::Approx(9.0 / 3.0));
  CHECK(c[1][0] == c[0][1]);
}
