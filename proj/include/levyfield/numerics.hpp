#pragma once

#include <cstdint>
#include <vector>

namespace levyfield::numerics {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n).
GaussRule gauss_legendre(int n);

double normal_cdf(double x) noexcept;
double normal_sf(double x) noexcept;

/// P(X > h, Y > h) for a standard bivariate normal pair with correlation rho.
double bivariate_normal_orthant(double h, double rho);

/// Surface area of the unit sphere in R^d.
double sphere_area(int dim) noexcept;

/// int_x^inf r^(n-1) e^(-r) dr for integer n >= 1.
double upper_gamma_int(int n, double x) noexcept;

/// int_{||x|| >= radius} C exp(-rate ||x||) dx in R^d.
double radial_exp_tail(int dim, double constant, double rate, double radius) noexcept;

/// sum_{k >= k0} shell(k) exp(-rate k), shell(k) = #{l in Z^d : ||l||_inf = k}.
double lattice_exp_tail(int dim, double rate, std::int64_t k0) noexcept;

}  // namespace levyfield::numerics
