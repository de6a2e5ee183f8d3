#pragma once

#include <stdexcept>
#include <string>

namespace vbpw {

/// Malformed input: profile, spectral set, point set or command options.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure (quadrature, eigen-solve, series) failed to reach
/// its target or hit an internal consistency check.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved = 0.0)
      : std::runtime_error(what), achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace vbpw
