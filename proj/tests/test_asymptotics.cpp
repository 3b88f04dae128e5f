#include <doctest.h>

#include <cmath>
#include <vector>

#include "levyfield/asymptotics.hpp"
#include "levyfield/errors.hpp"
#include "levyfield/estimators.hpp"
#include "levyfield/field_sim.hpp"
#include "levyfield/quadrature.hpp"

using namespace levyfield;

namespace {

// gamma(l) for f = exp(-|x|), d = 1, sigma2 = 1.
double exp_gamma(std::int64_t l) {
  const double a = static_cast<double>(std::abs(l));
  return (1.0 + a) * std::exp(-a);
}

// sum_l a_l gamma(l) with a_0 = 1 and a_l = far otherwise.
double exp_gamma_series(double far) {
  double s = exp_gamma(0);
  for (std::int64_t l = 1; l < 200; ++l) s += 2.0 * far * exp_gamma(l);
  return s;
}

const QuadratureSpec kFine{1.0 / 32, 16.0};

}  // namespace

TEST_CASE("mean asymptotic variance") {
  const PairWeights ones(1, WeightSource::analytic, 1.0);
  CHECK(mean_avar(box_kernel(1), 1.0, ones, {0.25, 4.0}).value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mean_avar(box_kernel(2), 1.0, PairWeights(2, WeightSource::analytic, 1.0), {0.25, 4.0}).value ==
        doctest::Approx(1.0).epsilon(1e-14));
  const PairWeights only_zero(1, WeightSource::analytic, 0.0, {{LatticePoint{0}, 1.0}});
  auto e = exp_kernel(1);
  CHECK(mean_avar(e, 1.0, only_zero, kFine).value == doctest::Approx(lag_covariance(e, 1.0, LatticePoint{0}, kFine)));

  const double series = exp_gamma_series(1.0);
  CHECK(series == doctest::Approx(4.00533).epsilon(1e-5));
  auto r = mean_avar(e, 1.0, ones, kFine, 2);
  CHECK(std::abs(r.value - series) < 1e-2);
  CHECK(r.tail_bound < 1e-5);
  REQUIRE(r.term_breakdown.size() == 5);
  CHECK(r.term_breakdown[3].value == doctest::Approx(exp_gamma(1)).epsilon(1e-3));

  // random-sampling weights a_0 = 1, a_l = 1/2
  auto bern = mean_avar(e, 2.0, limit_weights(BernoulliProvenance{0.5}, 1), kFine);
  CHECK(std::abs(bern.value - 2.0 * exp_gamma_series(0.5)) < 2e-2);
}

TEST_CASE("finite-n box variance") {
  auto e = exp_kernel(1);
  const std::int64_t ns[] = {1, 4, 16};
  auto v = box_mean_var(e, 1.0, ns, kFine);
  REQUIRE(v.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const double n = static_cast<double>(ns[i]);
    double s = 0.0;
    for (std::int64_t l = -2 * ns[i]; l <= 2 * ns[i]; ++l)
      s += std::max(0.0, 1.0 - std::abs(l) / (2.0 * n)) * exp_gamma(l);
    CHECK(std::abs(v[i].value - s) < 1e-2);
  }
  CHECK(v[0].value < v[1].value);
  CHECK(v[1].value < v[2].value);

  // direct Var of the box mean
  QuadratureSpec q{0.25, 8.0};
  auto set = box_set(4, 1);
  Simulator sim(e, LevyTriplet::gaussian(1.0), std::vector<LatticePoint>(set.points().begin(), set.points().end()), q);
  const std::int64_t four[] = {4};
  const double theory = box_mean_var(e, 1.0, four, q)[0].value;
  RngStream root(1);
  std::vector<double> s;
  for (std::uint64_t r = 0; r < 4000; ++r) {
    auto st = root.derive(r);
    s.push_back(std::sqrt(8.0) * sample_mean(sim.run(st), set));
  }
  double m2 = 0.0;
  for (double x : s) m2 += x * x;
  m2 /= s.size();
  CHECK(std::abs(m2 - theory) < 3.0 * theory * std::sqrt(2.0 / s.size()));
}

TEST_CASE("lattice gram sums") {
  auto e = exp_kernel(1);
  const std::vector<LatticePoint> lags{LatticePoint{0}, LatticePoint{1}, LatticePoint{-3}};
  auto g = lattice_gram(e, kFine, lags);
  for (const auto& l : lags)
    CHECK(g.lag_values.at(l) == doctest::Approx(SampledKernel::lag_product(SampledKernel(e, kFine), SampledKernel(e, kFine), l)).epsilon(1e-10));
  CHECK(std::abs(g.complete_sum - exp_gamma_series(1.0)) < 1e-2);
  CHECK(g.unit_cell_norm_sum > 0.0);
}

TEST_CASE("autocovariance asymptotic matrix") {
  const PairWeights ones(1, WeightSource::analytic, 1.0);
  const std::vector<LatticePoint> zero{LatticePoint{0}};
  QuadratureSpec q{0.25, 4.0};
  auto b = box_kernel(1);
  CHECK(acov_avar(b, LevyTriplet::gaussian(1.0), zero, ones, q).matrix[0][0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(acov_avar(b, LevyTriplet::symmetric_jumps(), zero, ones, q).matrix[0][0] == doctest::Approx(10.0).epsilon(1e-12));
  auto bern = limit_weights(BernoulliProvenance{0.3}, 1);
  CHECK(acov_avar(b, LevyTriplet::symmetric_jumps(), zero, bern, q).matrix[0][0] == doctest::Approx(10.0).epsilon(1e-12));
  CHECK_THROWS_AS(acov_avar(b, LevyTriplet::poisson(), zero, ones, q), DomainError);

  const std::vector<LatticePoint> two{LatticePoint{0}, LatticePoint{1}};
  auto v = acov_avar(b, LevyTriplet::gaussian(1.0), two, ones, q);
  CHECK(v.matrix[0][1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(acov_cov_limit(b, LevyTriplet::gaussian(1.0), two[0], two[1], ones, q) == v.matrix[0][1]);
}

TEST_CASE("exponential kernel pairing forms") {
  const PairWeights ones(1, WeightSource::analytic, 1.0);
  auto e = exp_kernel(1);
  const std::vector<LatticePoint> lags{LatticePoint{0}, LatticePoint{1}};
  auto std_form = acov_avar(e, LevyTriplet::gaussian(1.0), lags, ones, kFine, PairingForm::standard);
  auto swp_form = acov_avar(e, LevyTriplet::gaussian(1.0), lags, ones, kFine, PairingForm::swapped);
  // closed-form gamma series
  double s00 = 0.0, s01 = 0.0, s11_std = 0.0, s11_swp = 0.0;
  for (std::int64_t l = -60; l <= 60; ++l) {
    s00 += 2.0 * exp_gamma(l) * exp_gamma(l);
    s01 += exp_gamma(l) * exp_gamma(l + 1) + exp_gamma(l + 1) * exp_gamma(l);
    s11_std += exp_gamma(l) * exp_gamma(l) + exp_gamma(l + 1) * exp_gamma(l - 1);
    s11_swp += exp_gamma(l) * exp_gamma(l) + exp_gamma(l + 1) * exp_gamma(l + 1);
  }
  CHECK(std_form.matrix[0][0] == doctest::Approx(s00).epsilon(5e-3));
  CHECK(std_form.matrix[0][1] == doctest::Approx(s01).epsilon(5e-3));
  CHECK(swp_form.matrix[0][1] == doctest::Approx(s01).epsilon(5e-3));
  CHECK(std_form.matrix[1][1] == doctest::Approx(s11_std).epsilon(5e-3));
  CHECK(swp_form.matrix[1][1] == doctest::Approx(s11_swp).epsilon(5e-3));
  CHECK(std_form.tail_bound < 1e-5);

  for (const auto& m : {std_form.matrix, swp_form.matrix}) {
    CHECK(m[0][1] == m[1][0]);
    const double tr = m[0][0] + m[1][1];
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const double lo = 0.5 * (tr - std::sqrt(tr * tr - 4.0 * det));
    CHECK(lo >= -1e-8 * tr);
  }
  for (std::size_t p = 0; p < 2; ++p)
    for (std::size_t q = 0; q < 2; ++q)
      CHECK(acov_cov_limit(e, LevyTriplet::gaussian(1.0), lags[p], lags[q], ones, kFine) == std_form.matrix[p][q]);
}

TEST_CASE("quartic term enters with eta - 3") {
  const PairWeights ones(1, WeightSource::analytic, 1.0);
  auto e = exp_kernel(1);
  const std::vector<LatticePoint> zero{LatticePoint{0}};
  const double g = acov_avar(e, LevyTriplet::gaussian(2.0), zero, ones, kFine).matrix[0][0];
  const double c = acov_avar(e, LevyTriplet::symmetric_jumps(), zero, ones, kFine).matrix[0][0];
  // sum_l int f(u)^2 f(u+l)^2 for exp(-|x|): same pair series with exp(-2|x|)
  double quartic = 0.0;
  for (std::int64_t l = -60; l <= 60; ++l) {
    const double a = std::abs(static_cast<double>(l));
    quartic += (0.5 + a) * std::exp(-2.0 * a);
  }
  CHECK(c - g == doctest::Approx(0.5 * 4.0 * quartic).epsilon(5e-3));
}

TEST_CASE("fourth moment") {
  QuadratureSpec q{0.25, 4.0};
  auto b = box_kernel(1);
  CHECK(fourth_moment(b, b, b, b, LevyTriplet::gaussian(1.0), q) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fourth_moment(b, b, b, b, LevyTriplet::symmetric_jumps(), q) == doctest::Approx(14.0).epsilon(1e-12));
  auto a = indicator_kernel(std::vector<double>{0.0}, std::vector<double>{1.5});
  auto c = indicator_kernel(std::vector<double>{2.0}, std::vector<double>{2.5});
  CHECK(fourth_moment(a, a, c, c, LevyTriplet::gaussian(2.0), q) == doctest::Approx(4.0 * 1.5 * 0.5).epsilon(1e-12));
  CHECK(fourth_moment(a, a, c, c, LevyTriplet::symmetric_jumps(), q) == doctest::Approx(4.0 * 1.5 * 0.5).epsilon(1e-12));
  CHECK_THROWS_AS(fourth_moment(b, b, b, b, LevyTriplet::poisson(), q), DomainError);
}

TEST_CASE("summability diagnostic") {
  const PairWeights ones(1, WeightSource::analytic, 1.0);
  const std::int64_t radii[] = {2, 4, 8, 16};
  auto box = summability_diagnostic(indicator_kernel(std::vector<double>{0.0}, std::vector<double>{1.5}), ones,
                                    {0.25, 4.0}, radii);
  CHECK(box.partial_sums[1] == box.partial_sums[0]);
  CHECK(box.partial_sums[3] == box.partial_sums[0]);
  CHECK(box.tail_bounds[0] == 0.0);

  auto ex = summability_diagnostic(exp_kernel(1), ones, kFine, radii);
  for (std::size_t i = 1; i < 4; ++i) {
    CHECK(ex.partial_sums[i] >= ex.partial_sums[i - 1]);
    CHECK(ex.tail_bounds[i] < 0.5 * ex.tail_bounds[i - 1]);
  }
  CHECK(ex.epsilon == doctest::Approx(0.5));
  CHECK(std::abs(ex.partial_sums[3] - exp_gamma_series(1.0)) < 1e-2);
  // the certified bound covers the true remainder
  CHECK(ex.tail_bounds[0] >= exp_gamma_series(1.0) - ex.partial_sums[0] - 1e-2);

  const std::int64_t r3[] = {1, 2, 4};
  auto g = summability_diagnostic(green3d(1.0), PairWeights(3, WeightSource::analytic, 1.0), {0.25, 6.0}, r3);
  CHECK(g.epsilon == doctest::Approx(0.5));
  CHECK(std::isfinite(g.weighted_norm));
  CHECK(std::isfinite(g.tail_bounds.back()));
  CHECK(g.tail_bounds[2] < g.tail_bounds[0]);
}

TEST_CASE("finite-n covariance of the lag-zero estimator") {
  QuadratureSpec q{0.25, 2.0};
  auto b = box_kernel(1);
  auto set = box_set(16, 1);
  const std::vector<LatticePoint> zero{LatticePoint{0}};
  Simulator sim(b, LevyTriplet::gaussian(1.0), std::vector<LatticePoint>(set.points().begin(), set.points().end()), q);
  RngStream root(2);
  std::vector<double> g;
  for (std::uint64_t r = 0; r < 10000; ++r) {
    auto s = root.derive(r);
    g.push_back(sample_acov(sim.run(s), set, zero).values[0]);
  }
  double m = 0.0, v = 0.0;
  for (double x : g) m += x;
  m /= g.size();
  for (double x : g) v += (x - m) * (x - m);
  v /= g.size() - 1;
  const double limit = acov_cov_limit(b, LevyTriplet::gaussian(1.0), zero[0], zero[0],
                                      PairWeights(1, WeightSource::analytic, 1.0), q);
  CHECK(std::abs(32.0 * v / limit - 1.0) < 0.1);
}
