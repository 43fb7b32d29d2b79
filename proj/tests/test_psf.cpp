#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "onevstwo/psf.hpp"

using namespace onevstwo;

namespace {

double gauss1d(double x) {
  return std::pow(2.0 * M_PI, -0.25) * std::exp(-0.25 * x * x);
}

// Samples the unit-width Gaussian PSF on a centered square grid.
PointSpreadFunction sampled_gaussian(double spacing, double half,
                                     double x_shift = 0.0) {
  GridSpec g;
  g.nx = g.ny = 2 * static_cast<int>(std::round(half / spacing)) + 1;
  g.dx = g.dy = spacing;
  g.x0 = g.y0 = -spacing * (g.nx - 1) / 2.0;
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(g.nx) * g.ny);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      v.push_back(gauss1d(g.x0 + ix * g.dx - x_shift) *
                  gauss1d(g.y0 + iy * g.dy));
  // rescale so the trapezoid mass is exactly 1 even on truncated grids
  double mass = 0.0;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const double w = ((ix == 0 || ix == g.nx - 1) ? 0.5 : 1.0) *
                       ((iy == 0 || iy == g.ny - 1) ? 0.5 : 1.0);
      mass += w * v[iy * g.nx + ix] * v[iy * g.nx + ix];
    }
  mass *= g.dx * g.dy;
  for (double& a : v) a /= std::sqrt(mass);
  return PointSpreadFunction::from_grid(g, std::move(v));
}

}  // namespace

TEST_CASE("gaussian overlap closed form") {
  const PointSpreadFunction psf = PointSpreadFunction::gaussian();
  CHECK(overlap(psf, 0.0) == 1.0);
  CHECK(overlap(psf, 2.0) ==
        doctest::Approx(0.6065306597126334).epsilon(1e-14));
  CHECK_THROWS_AS(overlap(psf, -0.5), DomainError);
}

TEST_CASE("gaussian quadrature path matches the closed form to 1e-9") {
  const PointSpreadFunction psf = PointSpreadFunction::gaussian();
  for (double d : {0.0, 0.5, 1.0, 2.0, 5.0, 8.0, 10.0}) {
    const double exact = std::exp(-d * d / 8.0);
    CHECK(std::fabs(overlap_by_quadrature(psf, d) - exact) < 1e-9);
  }
}

TEST_CASE("overlap stats invariants") {
  const PointSpreadFunction psf = PointSpreadFunction::gaussian();

  const OverlapStats at0 = overlap_stats(psf, 0.0);
  CHECK(at0.delta == 1.0);
  CHECK(at0.chi == 1.0);
  CHECK(at0.lambda_plus == 1.0);
  CHECK(at0.lambda_minus == 0.0);

  const OverlapStats at2 = overlap_stats(psf, 2.0);
  CHECK(at2.delta == doctest::Approx(0.6065306597126334).epsilon(1e-12));
  CHECK(at2.lambda_plus ==
        doctest::Approx(0.8032653298563167).epsilon(1e-12));
  CHECK(at2.chi == doctest::Approx(0.8824969025845954).epsilon(1e-12));
  CHECK(at2.lambda_plus + at2.lambda_minus == 1.0);

  const OverlapStats far = overlap_stats(psf, 100.0);
  CHECK(std::fabs(far.lambda_plus - 0.5) < 1e-12);
  CHECK(std::fabs(far.chi) < 1e-12);

  // closed-form helper agrees with the generic path
  for (double d : {0.0, 0.7, 2.0, 5.0}) {
    const OverlapStats a = overlap_stats(psf, d);
    const OverlapStats b = gaussian_overlap_stats(d);
    CHECK(a.delta == b.delta);
    CHECK(a.chi == b.chi);
    CHECK(a.lambda_plus == b.lambda_plus);
  }
}

TEST_CASE("sampled gaussian reproduces overlaps with grid convergence") {
  double prev_err = 0.0;
  bool first = true;
  for (double spacing : {0.2, 0.1, 0.05}) {
    const PointSpreadFunction psf = sampled_gaussian(spacing, 8.0);
    const double err =
        std::fabs(overlap(psf, 1.0) - std::exp(-1.0 / 8.0));
    if (!first) CHECK(err < 0.5 * prev_err);  // second-order interpolation
    prev_err = err;
    first = false;
  }
  CHECK(prev_err < 3e-5);
}

TEST_CASE("fine sampled gaussian overlap within 1e-6") {
  const PointSpreadFunction psf = sampled_gaussian(0.008, 7.0);
  CHECK(std::fabs(overlap(psf, 1.0) - std::exp(-1.0 / 8.0)) < 1e-6);
}

TEST_CASE("cauchy-schwarz bounds on sampled overlaps") {
  const PointSpreadFunction psf = sampled_gaussian(0.1, 8.0);
  CHECK(overlap(psf, 0.0) == 1.0);
  for (double d : {0.3, 1.0, 2.5, 6.0, 20.0}) {
    const double v = overlap(psf, d);
    CHECK(v <= 1.0);
    CHECK(v >= -1.0);
  }
}

TEST_CASE("validation rejects bad sampled input") {
  CHECK_NOTHROW(sampled_gaussian(0.05, 8.0));
  CHECK_THROWS_AS(sampled_gaussian(0.1, 8.0, 0.3), AsymmetricPsf);

  // doubled amplitudes: mass 4
  {
    GridSpec g{-2.0, -2.0, 0.5, 0.5, 9, 9};
    std::vector<double> v(81, 0.0);
    for (int iy = 0; iy < 9; ++iy)
      for (int ix = 0; ix < 9; ++ix)
        v[iy * 9 + ix] = 2.0 * gauss1d(-2.0 + 0.5 * ix) * gauss1d(-2.0 + 0.5 * iy);
    CHECK_THROWS_AS(PointSpreadFunction::from_grid(g, std::move(v)),
                    NotNormalized);
  }

  // complex amplitudes
  {
    GridSpec g{-1.0, -1.0, 1.0, 1.0, 3, 3};
    std::vector<std::complex<double>> v(9, {0.3, 0.0});
    v[4] = {0.3, 1e-3};
    CHECK_THROWS_AS(PointSpreadFunction::from_grid(g, v), ComplexAmplitude);
  }

  // off-center grid cannot express the mirror symmetry
  {
    GridSpec g{-1.0, -2.0, 1.0, 1.0, 4, 5};
    std::vector<double> v(20, 0.1);
    CHECK_THROWS_AS(PointSpreadFunction::from_grid(g, std::move(v)),
                    AsymmetricPsf);
  }
}

TEST_CASE("direct image densities") {
  const PointSpreadFunction psf = PointSpreadFunction::gaussian();

  CHECK(direct_image_density(psf, Hypothesis::H1, 1.7, 0.0, 0.0) ==
        doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-14));

  // coincident sources: the mixture degenerates to the one-source density
  for (double x : {-1.0, 0.0, 0.4}) {
    CHECK(direct_image_density(psf, Hypothesis::H2, 0.0, x, 0.2) ==
          doctest::Approx(direct_image_density(psf, Hypothesis::H1, 0.0, x, 0.2))
              .epsilon(1e-14));
  }

  const double expected =
      0.5 * (1.0 / (2.0 * M_PI)) * (1.0 + std::exp(-2.0));
  CHECK(direct_image_density(psf, Hypothesis::H2, 2.0, 1.0, 0.0) ==
        doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("densities integrate to one") {
  const PointSpreadFunction psf = PointSpreadFunction::gaussian();
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-9;
  for (double d : {0.0, 0.5, 2.0, 5.0}) {
    for (Hypothesis h : {Hypothesis::H1, Hypothesis::H2}) {
      const double w = 0.5 * d + 8.0;
      const double mass = integrate2d(
          [&](double x, double y) {
            return direct_image_density(psf, h, d, x, y);
          },
          Box{-w, w, -8.0, 8.0}, cfg);
      CHECK(std::fabs(mass - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("sampled density domain rule") {
  // grid reaching 8 covers d/2 + 6 for d = 2 -> outside points give 0
  const PointSpreadFunction wide = sampled_gaussian(0.25, 8.0);
  CHECK(direct_image_density(wide, Hypothesis::H2, 2.0, 9.5, 0.0) == 0.0);
  // a 4-wide grid does not -> DomainError outside
  const PointSpreadFunction narrow = sampled_gaussian(0.05, 4.0);
  CHECK_THROWS_AS(direct_image_density(narrow, Hypothesis::H2, 2.0, 4.5, 0.0),
                  DomainError);
  // inside the grid both answer
  CHECK(direct_image_density(narrow, Hypothesis::H1, 2.0, 0.0, 0.0) ==
        doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-3));
}

TEST_CASE("csv grid file round trip and failure modes") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "onevstwo_psf_test";
  fs::create_directories(dir);
  const std::string csv = (dir / "grid.csv").string();

  GridSpec g;
  g.nx = g.ny = 25;
  g.dx = g.dy = 0.5;
  g.x0 = g.y0 = -6.0;
  {
    std::ofstream out(csv);
    out << "x,y,psi\n";
    char buf[64];
    for (int iy = 0; iy < g.ny; ++iy)
      for (int ix = 0; ix < g.nx; ++ix) {
        const double x = g.x0 + ix * g.dx, y = g.y0 + iy * g.dy;
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x, y,
                      gauss1d(x) * gauss1d(y));
        out << buf;
      }
  }
  {
    std::ofstream meta(csv + ".meta");
    meta << "nx=25\nny=25\ndx=0.5\ndy=0.5\nx0=-6\ny0=-6\n";
  }

  const PointSpreadFunction loaded = PointSpreadFunction::load_csv(csv);
  CHECK(loaded.kind() == PointSpreadFunction::Kind::Sampled);
  CHECK(loaded.amplitude(0.0, 0.0) ==
        doctest::Approx(gauss1d(0.0) * gauss1d(0.0)).epsilon(1e-12));
  CHECK(overlap(loaded, 1.0) == doctest::Approx(std::exp(-0.125)).epsilon(5e-3));

  SUBCASE("missing sidecar") {
    CHECK_THROWS_AS(PointSpreadFunction::load_csv((dir / "nope.csv").string()),
                    PsfError);
  }
  SUBCASE("complex column rejected") {
    const std::string ccsv = (dir / "cplx.csv").string();
    {
      std::ofstream out(ccsv);
      out << "x,y,psi,psi_im\n";
      for (int iy = 0; iy < 3; ++iy)
        for (int ix = 0; ix < 3; ++ix)
          out << (-1.0 + ix) << ',' << (-1.0 + iy) << ",0.33,"
              << (ix == 1 && iy == 1 ? "0.1" : "0") << "\n";
    }
    {
      std::ofstream meta(ccsv + ".meta");
      meta << "nx=3\nny=3\ndx=1\ndy=1\nx0=-1\ny0=-1\n";
    }
    CHECK_THROWS_AS(PointSpreadFunction::load_csv(ccsv), ComplexAmplitude);
  }
  SUBCASE("bad header") {
    const std::string bcsv = (dir / "bad.csv").string();
    {
      std::ofstream out(bcsv);
      out << "a,b,c\n0,0,1\n";
    }
    {
      std::ofstream meta(bcsv + ".meta");
      meta << "nx=3\nny=3\ndx=1\ndy=1\nx0=-1\ny0=-1\n";
    }
    CHECK_THROWS_AS(PointSpreadFunction::load_csv(bcsv), PsfError);
  }
  SUBCASE("truncated grid") {
    const std::string tcsv = (dir / "short.csv").string();
    {
      std::ofstream out(tcsv);
      out << "x,y,psi\n-1,-1,0.33\n";
    }
    {
      std::ofstream meta(tcsv + ".meta");
      meta << "nx=3\nny=3\ndx=1\ndy=1\nx0=-1\ny0=-1\n";
    }
    CHECK_THROWS_AS(PointSpreadFunction::load_csv(tcsv), PsfError);
  }
}
