#pragma once

#include <complex>
#include <string>
#include <vector>

#include "onevstwo/quadrature.hpp"
#include "onevstwo/types.hpp"

namespace onevstwo {

// Uniform rectangular grid: node (ix, iy) sits at (x0 + ix*dx, y0 + iy*dy),
// values stored row-major with x fastest.
struct GridSpec {
  double x0 = 0.0, y0 = 0.0;
  double dx = 0.0, dy = 0.0;
  int nx = 0, ny = 0;

  double x_max() const { return x0 + (nx - 1) * dx; }
  double y_max() const { return y0 + (ny - 1) * dy; }
};

// Normalized image-plane amplitude psi(x,y) of a single point source, with x
// in units of the width parameter of the Gaussian reference PSF. Either the
// analytic unit-width Gaussian or a sampled grid interpolated bilinearly.
//
// Instances are validated at construction (normalization, x-mirror symmetry,
// real amplitudes) and immutable afterwards; all member functions are const
// and safe to call concurrently.
class PointSpreadFunction {
 public:
  enum class Kind { GaussianUnitSigma, Sampled };

  static PointSpreadFunction gaussian(QuadratureConfig cfg = {});

  // Sampled amplitudes, row-major with x fastest. Throws AsymmetricPsf,
  // NotNormalized or DomainError on bad input.
  static PointSpreadFunction from_grid(const GridSpec& grid,
                                       std::vector<double> values,
                                       QuadratureConfig cfg = {});

  // Same, but rejects any nonzero imaginary part with ComplexAmplitude.
  static PointSpreadFunction from_grid(
      const GridSpec& grid, const std::vector<std::complex<double>>& values,
      QuadratureConfig cfg = {});

  // Loads `x,y,psi[,psi_im]` rows plus a `<csv_path>.meta` sidecar carrying
  // nx/ny/dx/dy/x0/y0 as key=value lines.
  static PointSpreadFunction load_csv(const std::string& csv_path);

  Kind kind() const { return kind_; }
  const QuadratureConfig& quadrature() const { return quad_; }
  const GridSpec& grid() const;  // Sampled only; throws DomainError otherwise

  // Amplitude at a point; bilinear between nodes and 0 outside the grid for
  // sampled PSFs.
  double amplitude(double x, double y) const;

  // Mass of |psi|^2 as integrated by this PSF's own quadrature (1 for the
  // analytic Gaussian; the bilinear interpolant's mass for sampled grids).
  double norm_squared() const { return norm_sq_; }

  // Whether the grid extends at least [-x_extent, x_extent] x [-y_extent,
  // y_extent]; true for the analytic Gaussian.
  bool covers(double x_extent, double y_extent) const;

  // Sampled node values, row-major with x fastest; empty for the Gaussian.
  const std::vector<double>& values() const { return values_; }

 private:
  PointSpreadFunction() = default;

  Kind kind_ = Kind::GaussianUnitSigma;
  QuadratureConfig quad_;
  GridSpec grid_;
  std::vector<double> values_;
  double norm_sq_ = 1.0;
};

// Derived overlap quantities for one (PSF, separation) pair.
struct OverlapStats {
  double d = 0.0;            // separation, units of sigma
  double delta = 1.0;        // <psi_+|psi_->, the PSF shifted against itself by d
  double lambda_plus = 1.0;  // (1 + delta)/2
  double lambda_minus = 0.0; // (1 - delta)/2
  double chi = 1.0;          // delta(d/2) = <psi_+|psi_1>
};

// Overlap delta(d) = integral of psi(x,y) psi(x-d,y): closed form exp(-d^2/8)
// for the analytic Gaussian, panel quadrature of the bilinear interpolant for
// sampled PSFs. Throws DomainError for d < 0.
double overlap(const PointSpreadFunction& psf, double d);

// Numerical-quadrature route for any PSF kind, including the analytic
// Gaussian: the independent cross-check of the closed form.
double overlap_by_quadrature(const PointSpreadFunction& psf, double d);

OverlapStats overlap_stats(const PointSpreadFunction& psf, double d);

// Exact closed-form stats for the unit-sigma Gaussian.
OverlapStats gaussian_overlap_stats(double d);

// Photon-arrival density at (x,y): |psi(x,y)|^2 under H1, the equal mixture of
// |psi(x -+ d/2, y)|^2 under H2. For sampled PSFs, points outside the grid are
// density 0 only when the grid extends 6 width units beyond both source
// positions; otherwise DomainError.
double direct_image_density(const PointSpreadFunction& psf, Hypothesis h,
                            double d, double x, double y);

}  // namespace onevstwo
