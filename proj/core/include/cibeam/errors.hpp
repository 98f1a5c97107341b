#pragma once

#include <stdexcept>
#include <string>

namespace cibeam {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A factorization pivot fell below the positive-definiteness floor,
/// typically signalling a rank-deficient channel.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// Matrix/vector dimensions do not agree.
class BadDimensions : public Error {
 public:
  using Error::Error;
};

/// Constellation order outside the supported set {2, 4, 8, 16}.
class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

/// Modulation incompatible with the requested precoding mode.
class UnsupportedModulation : public Error {
 public:
  using Error::Error;
};

/// A scalar parameter is outside its legal range.
class BadParameter : public Error {
 public:
  using Error::Error;
};

/// The dual vector has vanishing quadratic form; no beamformer can be scaled from it.
class DegenerateDual : public Error {
 public:
  using Error::Error;
};

/// Problem dimension exceeds the exhaustive solver's cap.
class TooLarge : public Error {
 public:
  using Error::Error;
};

/// Iterative solver hit its iteration cap before reaching the requested residual.
class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, double residual)
      : Error(what), final_residual(residual) {}
  double final_residual;
};

}  // namespace cibeam
