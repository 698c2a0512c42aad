#pragma once

#include <stdexcept>
#include <string>

namespace iontomo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A (eps, deps) pair that violates Im(conj(eps) * deps) = 1.
class InvalidTrajectory : public Error {
 public:
  using Error::Error;
};

/// The ODE solver could not reach the requested tolerance.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

/// Odd cat with vanishing amplitude: N^(-) diverges.
class NormalizationDivergence : public Error {
 public:
  using Error::Error;
};

/// (mu, nu) = (0, 0) or a frame with non-positive quadrature variance.
class DegenerateFrame : public Error {
 public:
  using Error::Error;
};

class ReconstructionQuality : public Error {
 public:
  using Error::Error;
};

class InsufficientAngles : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent grid/sinogram file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Non-finite evaluator output and similar numerical breakdowns.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace iontomo
