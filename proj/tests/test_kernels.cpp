#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "levyfield/errors.hpp"
#include "levyfield/kernels.hpp"
#include "levyfield/numerics.hpp"
#include "levyfield/quadrature.hpp"

using namespace levyfield;

namespace {

// int over [0,a]x[0,b]x[0,c] of exp(-k r)/r by dyadic refinement toward the
// singular corner: seven smooth sub-boxes by tensor Gauss, recurse on the eighth.
double corner_oracle(double a, double b, double c, double k) {
  static const auto rule = numerics::gauss_legendre(16);
  auto box = [&](double x0, double x1, double y0, double y1, double z0, double z1) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * rule.nodes[i];
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double y = 0.5 * (y0 + y1) + 0.5 * (y1 - y0) * rule.nodes[j];
        for (std::size_t l = 0; l < rule.nodes.size(); ++l) {
          const double z = 0.5 * (z0 + z1) + 0.5 * (z1 - z0) * rule.nodes[l];
          const double r = std::sqrt(x * x + y * y + z * z);
          s += rule.weights[i] * rule.weights[j] * rule.weights[l] * std::exp(-k * r) / r;
        }
      }
    }
    return s * (x1 - x0) * (y1 - y0) * (z1 - z0) / 8.0;
  };
  double total = 0.0;
  for (int level = 0; level < 40; ++level) {
    const double ha = a / 2, hb = b / 2, hc = c / 2;
    for (int m = 1; m < 8; ++m) {
      const double x0 = (m & 1) ? ha : 0.0, y0 = (m & 2) ? hb : 0.0, z0 = (m & 4) ? hc : 0.0;
      total += box(x0, x0 + ha, y0, y0 + hb, z0, z0 + hc);
    }
    a = ha;
    b = hb;
    c = hc;
  }
  return total;
}

double signed_oracle(std::array<double, 3> lower, double edge, double k) {
  // split the cube at the coordinate planes into corner boxes
  double total = 0.0;
  for (int m = 0; m < 8; ++m) {
    std::array<double, 3> len{};
    bool empty = false;
    for (int i = 0; i < 3; ++i) {
      const double lo = lower[i], hi = lower[i] + edge;
      const double part = (m >> i & 1) ? std::max(0.0, hi) - std::max(0.0, lo)
                                       : std::max(0.0, -lo) - std::max(0.0, -hi);
      if (part <= 0.0) empty = true;
      len[i] = part;
    }
    if (!empty) total += corner_oracle(len[0], len[1], len[2], k);
  }
  return total / (edge * edge * edge);
}

}  // namespace

TEST_CASE("point values") {
  CHECK(box_kernel(1)({0.5}) == 1.0);
  CHECK(box_kernel(3)({0.5, 0.5, 0.5}) == 1.0);
  CHECK(box_kernel(2)({1.0, 0.5}) == 0.0);
  CHECK(exp_kernel(2)({0.0, 0.0}) == 1.0);
  CHECK(green3d(1.0)({1.0, 0.0, 0.0}) == doctest::Approx(std::exp(-1.0) / (4.0 * std::numbers::pi)));
  CHECK(green3d(1.0)({0.0, 0.6, 0.8}) == doctest::Approx(0.0292749).epsilon(1e-5));
  CHECK_THROWS_AS(green3d(1.0)({0.0, 0.0, 0.0}), DomainError);
  CHECK(zero_kernel(2)({0.1, 0.2}) == 0.0);
  CHECK(gauss_kernel(1, 2.0)({2.0}) == doctest::Approx(std::exp(-0.5)));
}

TEST_CASE("transformations") {
  auto f = exp_kernel(1, 0.5);
  const double a[1] = {1.5};
  CHECK(f.shifted(std::span<const double>(a, 1))({2.0}) == doctest::Approx(f({0.5})));
  CHECK(f.shifted(LatticePoint{2})({1.0}) == doctest::Approx(f({-1.0})));
  auto b = indicator_kernel(std::vector<double>{0.0}, std::vector<double>{2.0});
  CHECK(b.reflected()({-1.5}) == 1.0);
  CHECK(b.reflected()({1.5}) == 0.0);
  CHECK(f.scaled(-3.0)({1.0}) == doctest::Approx(-3.0 * f({1.0})));
  CHECK(f.scaled(-3.0).scale() == -3.0);
  CHECK(f.scaled(-3.0).absolute()({1.0}) == doctest::Approx(3.0 * f({1.0})));
  CHECK(b.shifted(LatticePoint{1}).support().lo[0] == 1.0);
  CHECK(b.support_radius() == 2.0);
  CHECK(f.support_radius() == std::numeric_limits<double>::infinity());
}

TEST_CASE("truncation") {
  auto b = box_kernel(2);
  auto t = b.truncated(2.0);
  for (double x = -2.5; x < 2.5; x += 0.37)
    for (double y = -2.5; y < 2.5; y += 0.41) CHECK(t({x, y}) == b({x, y}));
  auto e = exp_kernel(1);
  CHECK(e.truncated(1.0)({1.0}) == 0.0);
  CHECK(e.truncated(1.0)({-1.0}) == e({-1.0}));
  CHECK(e.truncated(1.0)({-1.5}) == 0.0);
  CHECK_THROWS_AS(e.truncated(0.0), std::invalid_argument);

  // ||f - f_h||^2 = int f^2 - int f_h^2, analytically exp(-2h)
  QuadratureSpec q{1.0 / 64, 16.0};
  const double full = inner_product(e, e, q).value;
  double prev = full;
  for (double h : {1.0, 2.0, 4.0, 8.0}) {
    auto th = e.truncated(h);
    const double rest = full - inner_product(th, th, q).value;
    CHECK(rest <= prev);
    CHECK(rest == doctest::Approx(std::exp(-2.0 * h)).epsilon(2e-3 * std::exp(2.0 * h) + 1e-3));
    prev = rest;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("yukawa cell average against closed form at k = 0") {
  const double exact = 3.0 * std::log((1.0 + std::sqrt(3.0)) / std::sqrt(2.0)) - std::numbers::pi / 4.0;
  CHECK(exact == doctest::Approx(1.19004).epsilon(1e-5));
  CHECK(yukawa_corner_box_integral(1.0, 1.0, 1.0, 0.0) == doctest::Approx(exact).epsilon(1e-10));
  CHECK(corner_oracle(1.0, 1.0, 1.0, 0.0) == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("yukawa integrals against the corner recursion") {
  for (double k : {0.5, 1.0, 3.0}) {
    CHECK(yukawa_corner_box_integral(1.0, 0.5, 2.0, k) == doctest::Approx(corner_oracle(1.0, 0.5, 2.0, k)).epsilon(1e-8));
    const std::array<double, 3> lower{-0.03, -0.01, -0.05};
    CHECK(yukawa_cell_average(lower, 0.0625, k) == doctest::Approx(signed_oracle(lower, 0.0625, k)).epsilon(1e-8));
    const std::array<double, 3> corner{0.0, 0.0, 0.0};
    CHECK(yukawa_cell_average(corner, 0.25, k) == doctest::Approx(signed_oracle(corner, 0.25, k)).epsilon(1e-8));
  }
}

TEST_CASE("singular cells use the cell average") {
  auto g = green3d(1.0);
  const std::array<double, 3> lower{0.0, 0.0, 0.0};
  const double v = g.cell_value(lower, 0.0625);
  CHECK(v == doctest::Approx(kInvFourPi * signed_oracle(lower, 0.0625, 1.0)).epsilon(1e-8));
  CHECK(g.scaled(2.0).cell_value(lower, 0.0625) == 2.0 * v);
  CHECK(g.scaled(2.0).unscaled_cell_value(lower, 0.0625) == v);
  // away from the singularity the midpoint rule applies
  const std::array<double, 3> off{1.0, 0.0, 0.0};
  CHECK(g.cell_value(off, 0.0625) == g({1.03125, 0.03125, 0.03125}));
}

TEST_CASE("green kernel integrates to 1/mu") {
  for (double mu : {1.0, 4.0}) {
    QuadratureSpec q{1.0 / 8, 10.0};
    auto k = green3d(mu);
    std::vector<Kernel> f{k};
    auto r = integrate_product(f, q);
    CHECK(r.value == doctest::Approx(1.0 / mu).epsilon(0.02));
    CHECK(r.tail_bound < 1e-2);
  }
}
