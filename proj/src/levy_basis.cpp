#include "levyfield/levy_basis.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "levyfield/errors.hpp"

namespace levyfield {

LevyTriplet::LevyTriplet(double gaussian_var, double drift, std::vector<JumpAtom> jumps)
    : gaussian_var_(gaussian_var), drift_(drift), jumps_(std::move(jumps)) {
  if (!(gaussian_var >= 0.0) || !std::isfinite(gaussian_var))
    throw std::invalid_argument("gaussian_var must be finite and >= 0");
  if (!std::isfinite(drift)) throw std::invalid_argument("drift must be finite");
  for (const auto& j : jumps_) {
    if (!(j.mass > 0.0) || !std::isfinite(j.mass))
      throw std::invalid_argument("jump mass must be finite and > 0");
    if (j.size == 0.0 || !std::isfinite(j.size))
      throw std::invalid_argument("jump size must be finite and nonzero (nu({0}) = 0)");
  }
}

double LevyTriplet::total_jump_mass() const noexcept {
  double m = 0.0;
  for (const auto& j : jumps_) m += j.mass;
  return m;
}

LevyTriplet LevyTriplet::centered() const {
  return {gaussian_var_, drift_ - derive_moments(*this).mean, jumps_};
}

double MomentSet::eta() const {
  if (mean != 0.0) throw DomainError("eta is only defined for a mean-zero basis");
  if (!(sigma2 > 0.0)) throw DomainError("eta is only defined for positive variance");
  return mu4 / (sigma2 * sigma2);
}

MomentSet derive_moments(const LevyTriplet& t) {
  MomentSet m;
  m.mean = t.drift();
  m.sigma2 = t.gaussian_var();
  for (const auto& j : t.jumps()) {
    if (std::abs(j.size) > 1.0) m.mean += j.mass * j.size;
    const double s2 = j.size * j.size;
    m.sigma2 += j.mass * s2;
    m.kappa3 += j.mass * s2 * j.size;
    m.kappa4 += j.mass * s2 * s2;
  }
  m.mu4 = m.kappa4 + 3.0 * m.sigma2 * m.sigma2;
  return m;
}

std::complex<double> characteristic_exponent(const LevyTriplet& t, double z) {
  using namespace std::complex_literals;
  std::complex<double> psi = 1i * t.drift() * z - 0.5 * t.gaussian_var() * z * z;
  for (const auto& j : t.jumps()) {
    const double x = j.size;
    std::complex<double> term = std::exp(1i * x * z) - 1.0;
    if (std::abs(x) <= 1.0) term -= 1i * x * z;
    psi += j.mass * term;
  }
  return psi;
}

double deterministic_rate(const LevyTriplet& t) noexcept {
  double c = t.drift();
  for (const auto& j : t.jumps())
    if (std::abs(j.size) <= 1.0) c -= j.mass * j.size;
  return c;
}

double sample_increment(const LevyTriplet& t, double volume, RngStream& stream) {
  if (!(volume > 0.0)) throw DomainError("increment volume must be > 0, got " + std::to_string(volume));
  double x = deterministic_rate(t) * volume;
  if (t.gaussian_var() > 0.0) {
    std::normal_distribution<double> normal(0.0, std::sqrt(t.gaussian_var() * volume));
    x += normal(stream);
  }
  for (const auto& j : t.jumps()) {
    std::poisson_distribution<long long> count(j.mass * volume);
    x += static_cast<double>(count(stream)) * j.size;
  }
  return x;
}

std::vector<double> sample_increments(const LevyTriplet& t, double volume, std::size_t count,
                                      RngStream& stream) {
  if (!(volume > 0.0)) throw DomainError("increment volume must be > 0, got " + std::to_string(volume));
  const double base = deterministic_rate(t) * volume;
  std::vector<double> out(count, base);
  if (t.gaussian_var() > 0.0) {
    std::normal_distribution<double> normal(0.0, std::sqrt(t.gaussian_var() * volume));
    for (double& x : out) x += normal(stream);
  }
  for (const auto& j : t.jumps()) {
    std::poisson_distribution<long long> n(j.mass * volume);
    for (double& x : out) x += static_cast<double>(n(stream)) * j.size;
  }
  return out;
}

}  // namespace levyfield
