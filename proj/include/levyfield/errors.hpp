#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace levyfield {

/// Argument outside the mathematical domain of an operation (e.g. a
/// non-positive volume, eta of a non-centred basis).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A requested grid or table would exceed the configured memory budget.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, std::size_t required_bytes)
      : std::runtime_error(what), required_bytes_(required_bytes) {}
  std::size_t required_bytes() const noexcept { return required_bytes_; }

 private:
  std::size_t required_bytes_;
};

/// Kernel support reaches outside the simulated noise window.
class BoundaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A field sample is missing a point an estimator needs.
class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation not available for this kernel / provenance combination.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Statistic undefined for this realisation (zero denominator, empty set).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace levyfield
