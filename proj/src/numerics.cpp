#include "levyfield/numerics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "levyfield/lattice.hpp"

namespace levyfield::numerics {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
double normal_sf(double x) noexcept { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double bivariate_normal_orthant(double h, double rho) {
  if (rho < -1.0 || rho > 1.0) throw std::invalid_argument("correlation must lie in [-1, 1]");
  if (rho == 1.0) return normal_sf(h);
  if (rho == -1.0) return h < 0.0 ? normal_sf(h) - normal_sf(-h) : 0.0;
  if (h == 0.0) return 0.25 + std::asin(rho) / (2.0 * std::numbers::pi);
  // P(X > h, Y > h) = int_h^inf phi(x) P(Y > h | X = x) dx, integrated over
  // [h, h + 40] in panels.
  static const GaussRule rule = gauss_legendre(32);
  const double s = std::sqrt(1.0 - rho * rho);
  const double lo = h, hi = std::max(h, 0.0) + 40.0;
  const int panels = 64;
  const double width = (hi - lo) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * width;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = a + 0.5 * width * (rule.nodes[i] + 1.0);
      const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
      total += 0.5 * width * rule.weights[i] * phi * normal_sf((h - rho * x) / s);
    }
  }
  return total;
}

double sphere_area(int dim) noexcept {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

double upper_gamma_int(int n, double x) noexcept {
  // (n-1)! e^-x sum_{k<n} x^k / k!
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < n; ++k) {
    term *= x / k;
    sum += term;
  }
  return std::tgamma(static_cast<double>(n)) * std::exp(-x) * sum;
}

double radial_exp_tail(int dim, double constant, double rate, double radius) noexcept {
  return constant * sphere_area(dim) * upper_gamma_int(dim, rate * radius) / std::pow(rate, dim);
}

double lattice_exp_tail(int dim, double rate, std::int64_t k0) noexcept {
  double total = 0.0;
  for (std::int64_t k = std::max<std::int64_t>(k0, 0);; ++k) {
    const double term = shell_count(dim, k) * std::exp(-rate * static_cast<double>(k));
    total += term;
    if (static_cast<double>(k) * rate > dim + 2.0 && term < 1e-18 * std::max(total, 1e-300)) break;
    if (k > k0 + 100000) break;
  }
  return total;
}

}  // namespace levyfield::numerics
