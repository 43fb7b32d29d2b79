#pragma once

#include <stdexcept>
#include <string>

namespace onevstwo {

// Invalid argument values: negative separation, bad priors, out-of-range L, ...
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Adaptive quadrature exhausted its panel budget before reaching tolerance.
struct QuadratureFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scalar minimization failed, or an integrand check exposed unnormalized input.
struct OptimizationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Base for PSF construction/validation failures.
struct PsfError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// psi(x,y) != psi(-x,y) beyond tolerance (or the grid cannot express the mirror).
struct AsymmetricPsf : PsfError {
  using PsfError::PsfError;
};

// Integral of |psi|^2 deviates from 1 beyond tolerance.
struct NotNormalized : PsfError {
  using PsfError::PsfError;
};

// Input amplitudes carry a nonzero imaginary part.
struct ComplexAmplitude : PsfError {
  using PsfError::PsfError;
};

}  // namespace onevstwo
