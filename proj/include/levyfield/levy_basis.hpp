#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "levyfield/random.hpp"

namespace levyfield {

/// Atom of a finite Levy measure: mass * delta_{size}.
struct JumpAtom {
  double mass;
  double size;
};

/// Characteristic triplet (a, nu, gamma) of a Levy basis with a Gaussian
/// part and a finite (compound Poisson) jump measure nu = sum mass_i delta_{size_i}.
/// The drift is the gamma of the truncated Levy-Khintchine form, i.e. jumps with
/// |size| <= 1 are compensated.
class LevyTriplet {
 public:
  LevyTriplet() = default;
  LevyTriplet(double gaussian_var, double drift, std::vector<JumpAtom> jumps = {});

  static LevyTriplet gaussian(double variance) { return {variance, 0.0}; }
  /// Unit-rate Poisson basis: L(A) ~ Poisson(|A|) (mean 1, variance 1).
  static LevyTriplet poisson(double rate = 1.0) { return {0.0, rate, {{rate, 1.0}}}; }
  /// Symmetric +-1 jumps, each with the given mass; mean zero.
  static LevyTriplet symmetric_jumps(double mass = 1.0) {
    return {0.0, 0.0, {{mass, 1.0}, {mass, -1.0}}};
  }

  double gaussian_var() const noexcept { return gaussian_var_; }
  double drift() const noexcept { return drift_; }
  const std::vector<JumpAtom>& jumps() const noexcept { return jumps_; }
  double total_jump_mass() const noexcept;

  /// Same triplet with the drift shifted so the basis has mean zero.
  LevyTriplet centered() const;

 private:
  double gaussian_var_ = 0.0;
  double drift_ = 0.0;
  std::vector<JumpAtom> jumps_;
};

/// Moments of L([0,1]^d).
struct MomentSet {
  double mean = 0.0;
  double sigma2 = 0.0;  ///< variance (equals E L^2 when mean == 0)
  double mu4 = 0.0;     ///< fourth central moment
  double kappa3 = 0.0;
  double kappa4 = 0.0;  ///< fourth cumulant, (eta - 3) sigma^4 for centred bases

  /// sigma^-4 E L^4; only defined for mean zero and positive variance.
  double eta() const;
};

MomentSet derive_moments(const LevyTriplet& triplet);

/// psi(z) with E exp(i z L(A)) = exp(psi(z) |A|).
std::complex<double> characteristic_exponent(const LevyTriplet& triplet, double z);

/// count i.i.d. draws of L(A) with Lebesgue measure |A| = volume.
std::vector<double> sample_increments(const LevyTriplet& triplet, double volume, std::size_t count,
                                      RngStream& stream);

/// Single draw of L(A), |A| = volume.
double sample_increment(const LevyTriplet& triplet, double volume, RngStream& stream);

/// Deterministic per-unit-volume part of L: drift minus the compensator of
/// the small jumps.
double deterministic_rate(const LevyTriplet& triplet) noexcept;

}  // namespace levyfield
