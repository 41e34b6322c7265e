#pragma once

#include <stdexcept>
#include <string>

namespace anisoscat {

// Phase function failed validation (shape, normalization, ...).
struct KernelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Normalization integral of the phase function is zero or negative.
struct NonPositiveNormalization : KernelError {
  explicit NonPositiveNormalization(double integral)
      : KernelError("phase function normalization integral is non-positive: " +
                    std::to_string(integral)),
        integral(integral) {}
  double integral;
};

// Phase function dips below zero on the validation grid.
struct NegativeDensity : KernelError {
  NegativeDensity(double mu, double value)
      : KernelError("phase function is negative: p(" + std::to_string(mu) +
                    ") = " + std::to_string(value)),
        mu(mu),
        value(value) {}
  double mu;
  double value;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inverse-CDF bisection did not reach tolerance; the CDF is not monotone,
// which only happens for an invalid (negative) kernel.
struct ConvergenceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mean scattering cosine >= 1: the diffusion limit degenerates.
struct SingularKernel : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fewer qualifying samples than a fit requires.
struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user-facing configuration (unknown preset, malformed file, ...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace anisoscat
