#include "onevstwo/types.hpp"

#include <cmath>

namespace onevstwo {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::QuantumLimit: return "quantum";
    case Scheme::BSpade: return "bspade";
    case Scheme::Sliver: return "sliver";
    case Scheme::DirectImaging: return "direct";
  }
  return "unknown";
}

void validate_priors(double p1, double p2) {
  if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0))
    throw DomainError("priors must lie in [0, 1]");
  if (std::fabs(p1 + p2 - 1.0) > 1e-12)
    throw DomainError("priors must sum to 1");
}

void Scenario::validate() const {
  if (!(d >= 0.0)) throw DomainError("scenario: separation must be >= 0");
  validate_priors(p1, p2);
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw DomainError("scenario: epsilon must lie in (0, 1)");
  if (modes < 1) throw DomainError("scenario: mode count must be positive");
}

}  // namespace onevstwo
