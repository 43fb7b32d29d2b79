#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include "onevstwo/errors.hpp"

namespace onevstwo {

enum class Hypothesis { H1, H2 };  // one source midway vs. two sources at +-d/2

enum class Scheme { QuantumLimit, BSpade, Sliver, DirectImaging };

const char* scheme_name(Scheme s);

// Test configuration: separation (units of the PSF width), priors, mean photon
// number per temporal mode, and the number of temporal modes.
struct Scenario {
  double d = 0.0;
  double p1 = 0.5;
  double p2 = 0.5;
  double epsilon = 0.01;
  long modes = 1;  // M

  // Throws DomainError on invalid fields.
  void validate() const;

  // The per-mode photon model drops O(epsilon^2) terms; flag values where that
  // truncation is questionable.
  bool high_epsilon() const { return epsilon > 0.1; }
};

void validate_priors(double p1, double p2);

struct ConditionalOnL {
  long photons = 0;  // L
};

struct UnconditionalOnM {
  long modes = 1;  // M
  double epsilon = 0.0;
};

using Conditioning = std::variant<ConditionalOnL, UnconditionalOnM>;

// Error probabilities for one scheme under one conditioning.
// alpha/beta are absent for the quantum limit, which is defined as an average
// error only.
struct ErrorReport {
  std::optional<double> alpha;  // type-I (false alarm)
  std::optional<double> beta;   // type-II (miss)
  double p_error = 0.0;         // p1*alpha + p2*beta
  Conditioning conditioning;
  Scheme scheme = Scheme::QuantumLimit;
  // True when the simplified decision rule coincides with the likelihood-ratio
  // test for these priors (always true for p1 >= p2).
  bool rule_matches_lrt = true;
  bool model_warning = false;  // epsilon beyond the weak-source regime
};

// Asymptotic error exponent (nats per detected photon) with the minimizing
// Chernoff parameter and solver diagnostics.
struct ChernoffResult {
  double exponent = 0.0;
  double s_star = 0.5;
  Scheme scheme = Scheme::QuantumLimit;
  int iterations = 0;
  double tolerance = 0.0;  // final bracket width in s
};

}  // namespace onevstwo
