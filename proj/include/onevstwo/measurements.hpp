#pragma once

#include <functional>
#include <span>

#include "onevstwo/psf.hpp"
#include "onevstwo/types.hpp"

namespace onevstwo {

// Simplified-rule error probabilities for the binary mode sorter: alpha = 0,
// beta = chi^(2L) conditionally, p2*(1 - eps + eps*chi^2)^M unconditionally.
ErrorReport bspade_error(const OverlapStats& stats, double p1, double p2,
                         const Conditioning& cond);

// Simplified-rule error probabilities for the inversion interferometer:
// alpha = 0, beta = lambda_+^L conditionally,
// p2*(1 - eps + eps*lambda_+)^M unconditionally.
ErrorReport sliver_error(const OverlapStats& stats, double p1, double p2,
                         const Conditioning& cond);

// -2 log chi; coincides with the quantum Chernoff exponent.
ChernoffResult bspade_exponent(const OverlapStats& stats);

// -log lambda_+; approaches log 2 for fully resolved sources.
ChernoffResult sliver_exponent(const OverlapStats& stats);

// Chernoff distance -log min_s sum_z p(z)^s q(z)^(1-s) for two discrete
// outcome distributions. Throws OptimizationFailure when some integral
// exceeds 1 + 1e-9 (unnormalized input), DomainError on malformed input.
ChernoffResult classical_chernoff(std::span<const double> p,
                                  std::span<const double> q);

using Density2d = std::function<double(double, double)>;

// Continuous-outcome Chernoff distance via 2-D panel quadrature of the Hoelder
// integral over the given truncation box.
ChernoffResult classical_chernoff(const Density2d& density1,
                                  const Density2d& density2, const Box& box,
                                  const QuadratureConfig& cfg = {});

// Hoelder integral of the two direct-imaging densities for the unit-sigma
// Gaussian PSF, with the Chernoff parameter attached to the two-source
// density:  exp(-s d^2/8) E[cosh^s(x d/2)],  x ~ N(0,1), by Gauss-Hermite.
double gaussian_direct_chernoff_integral(double s, double d, int order = 0);

// Asymptotic error exponent of ideal continuum photodetection; Gauss-Hermite
// path for the Gaussian PSF, 2-D quadrature otherwise.
ChernoffResult direct_imaging_exponent(const PointSpreadFunction& psf,
                                       double d);

// Bhattacharyya coefficient of the two arrival densities; equals the Hoelder
// integral at s = 1/2.
double bhattacharyya(const PointSpreadFunction& psf, double d);

// 2-D quadrature route for the coefficient, usable for any PSF kind; the
// independent cross-check of the Gauss-Hermite path.
double bhattacharyya_by_quadrature(const PointSpreadFunction& psf, double d);

struct DirectImagingBounds {
  double lower = 0.0;
  double upper = 0.0;
  double coefficient = 1.0;  // Bhattacharyya coefficient F
};

// Equal-prior bracket on the direct-imaging minimum error conditioned on L
// photons: [ (1 - sqrt(1 - F^(2L)))/2,  exp(-L*exponent)/2 ].
DirectImagingBounds direct_imaging_bounds(double coefficient, double exponent,
                                          long L);

// The same bracket mixed over the binomial photon-count distribution of M
// temporal modes.
DirectImagingBounds direct_imaging_bounds_unconditional(double coefficient,
                                                        double exponent,
                                                        double epsilon, long M);

}  // namespace onevstwo
