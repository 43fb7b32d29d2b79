#pragma once

#include "onevstwo/psf.hpp"
#include "onevstwo/types.hpp"

namespace onevstwo {

// Minimum average error probability over all quantum measurements, conditioned
// on L detected photons:
//   (p1 + p2*lam^L)/2 * [1 - sqrt(1 - 4 p1 p2 chi^(2L) / (p1 + p2*lam^L)^2)].
// Powers are taken in the log domain and the bracket is evaluated through the
// cancellation-free identity 1 - sqrt(1-z) = z / (1 + sqrt(1-z)).
ErrorReport min_error_conditional(const OverlapStats& stats, double p1,
                                  double p2, long L);

// Binomial mixture of the conditional minimum over the photon-count
// distribution of M temporal modes with per-mode photon probability epsilon.
ErrorReport min_error_unconditional(const OverlapStats& stats,
                                    const Scenario& scenario);

struct ApproxConditionalError {
  double value = 0.0;        // p1 p2 chi^(2L) / (p1 + p2 lam^L)
  double upper_bound = 0.0;  // p2 chi^(2L)
  // Whether L is deep enough in the asymptotic regime (chi^(2L) well below
  // p1/p2) for the approximation to stand.
  bool precondition_ok = false;
};

// Large-L approximation of the conditional minimum.
ApproxConditionalError min_error_approx(const OverlapStats& stats, double p1,
                                        double p2, long L);

// Quantum Chernoff exponent -2 log chi; +inf for chi = 0, DomainError for
// chi < 0.
ChernoffResult quantum_chernoff(const OverlapStats& stats);

// Independent small-L route to the conditional minimum: represents the
// difference operator in the two-dimensional span of the L-fold symmetric
// eigenmode and the one-source state via their Gram matrix, orthonormalizes,
// and takes the trace norm from a 2x2 eigendecomposition. Valid for L in
// [1, 8]; agreement with min_error_conditional is the correctness check for
// both routes.
double min_error_conditional_gram(const OverlapStats& stats, double p1,
                                  double p2, int L);

}  // namespace onevstwo
