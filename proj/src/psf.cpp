#include "onevstwo/psf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace onevstwo {

namespace {

// One-dimensional factor of the unit-sigma Gaussian PSF.
double gauss1d(double x) {
  static const double norm = std::pow(2.0 * M_PI, -0.25);
  return norm * std::exp(-0.25 * x * x);
}

constexpr double kMirrorTol = 1e-9;
constexpr double kSampledNormTol = 1e-6;

void check_grid(const GridSpec& g) {
  if (g.nx < 2 || g.ny < 2)
    throw DomainError("sampled PSF: grid needs at least 2x2 nodes");
  if (!(g.dx > 0.0) || !(g.dy > 0.0))
    throw DomainError("sampled PSF: grid spacings must be positive");
}

// Trapezoid mass of the squared samples; spectrally accurate for smooth
// fast-decaying data, so it checks the data rather than the interpolant.
double trapezoid_norm_sq(const GridSpec& g, const std::vector<double>& v) {
  double total = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    const double wy = (iy == 0 || iy == g.ny - 1) ? 0.5 : 1.0;
    double row = 0.0;
    for (int ix = 0; ix < g.nx; ++ix) {
      const double wx = (ix == 0 || ix == g.nx - 1) ? 0.5 : 1.0;
      const double a = v[static_cast<std::size_t>(iy) * g.nx + ix];
      row += wx * a * a;
    }
    total += wy * row;
  }
  return total * g.dx * g.dy;
}

// Integral of B(x,y)*B(x-d,y) for the bilinear interpolant B, by 3x3
// Gauss-Legendre on every cell of the partition refined with the shifted grid
// lines. The integrand is biquadratic on each such cell, so this is exact.
double bilinear_product_integral(const PointSpreadFunction& psf, double d) {
  const GridSpec& g = psf.grid();
  const double lo = g.x0 + d, hi = g.x_max();
  if (lo >= hi) return 0.0;

  std::vector<double> cuts;
  cuts.reserve(2 * g.nx);
  for (int i = 0; i < g.nx; ++i) {
    const double x = g.x0 + i * g.dx;
    if (x >= lo - 1e-12 && x <= hi + 1e-12) cuts.push_back(x);
    const double xs = x + d;
    if (xs >= lo - 1e-12 && xs <= hi + 1e-12) cuts.push_back(xs);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return b - a < 1e-12; }),
             cuts.end());
  if (cuts.size() < 2) return 0.0;

  const GaussRule& r = gauss_legendre(3);
  double total = 0.0;
  for (int iy = 0; iy + 1 < g.ny; ++iy) {
    const double ya = g.y0 + iy * g.dy, yb = ya + g.dy;
    const double cy = 0.5 * (ya + yb), sy = 0.5 * (yb - ya);
    for (std::size_t ic = 0; ic + 1 < cuts.size(); ++ic) {
      const double cx = 0.5 * (cuts[ic] + cuts[ic + 1]);
      const double sx = 0.5 * (cuts[ic + 1] - cuts[ic]);
      double cell = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        const double x = cx + sx * r.nodes[i];
        double row = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
          const double y = cy + sy * r.nodes[j];
          row += r.weights[j] * psf.amplitude(x, y) * psf.amplitude(x - d, y);
        }
        cell += r.weights[i] * row;
      }
      total += cell * sx * sy;
    }
  }
  return total;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

PointSpreadFunction PointSpreadFunction::gaussian(QuadratureConfig cfg) {
  PointSpreadFunction psf;
  psf.kind_ = Kind::GaussianUnitSigma;
  psf.quad_ = cfg;
  psf.norm_sq_ = 1.0;
  return psf;
}

PointSpreadFunction PointSpreadFunction::from_grid(const GridSpec& grid,
                                                   std::vector<double> values,
                                                   QuadratureConfig cfg) {
  check_grid(grid);
  if (values.size() != static_cast<std::size_t>(grid.nx) * grid.ny)
    throw DomainError("sampled PSF: value count does not match grid");
  for (double v : values)
    if (!std::isfinite(v))
      throw DomainError("sampled PSF: non-finite amplitude");

  // Mirror symmetry about the y-axis requires the x-grid itself to be
  // mirror-symmetric.
  if (std::fabs(grid.x0 + grid.x_max()) > kMirrorTol)
    throw AsymmetricPsf("sampled PSF: x-grid is not centered on 0");
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix) {
      const std::size_t a = static_cast<std::size_t>(iy) * grid.nx + ix;
      const std::size_t b =
          static_cast<std::size_t>(iy) * grid.nx + (grid.nx - 1 - ix);
      if (std::fabs(values[a] - values[b]) > kMirrorTol)
        throw AsymmetricPsf("sampled PSF: psi(x,y) != psi(-x,y)");
    }

  const double mass = trapezoid_norm_sq(grid, values);
  if (std::fabs(mass - 1.0) > kSampledNormTol)
    throw NotNormalized("sampled PSF: |psi|^2 mass is " + std::to_string(mass));

  PointSpreadFunction psf;
  psf.kind_ = Kind::Sampled;
  psf.quad_ = cfg;
  psf.grid_ = grid;
  psf.values_ = std::move(values);
  psf.norm_sq_ = bilinear_product_integral(psf, 0.0);
  return psf;
}

PointSpreadFunction PointSpreadFunction::from_grid(
    const GridSpec& grid, const std::vector<std::complex<double>>& values,
    QuadratureConfig cfg) {
  std::vector<double> real;
  real.reserve(values.size());
  for (const auto& v : values) {
    if (v.imag() != 0.0)
      throw ComplexAmplitude("sampled PSF: nonzero imaginary amplitude");
    real.push_back(v.real());
  }
  return from_grid(grid, std::move(real), cfg);
}

PointSpreadFunction PointSpreadFunction::load_csv(const std::string& csv_path) {
  const std::string meta_path = csv_path + ".meta";
  std::ifstream meta(meta_path);
  if (!meta) throw PsfError("cannot open PSF sidecar " + meta_path);
  std::map<std::string, double> kv;
  std::string line;
  while (std::getline(meta, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw PsfError("sidecar line is not key=value: " + line);
    kv[trim(line.substr(0, eq))] = std::stod(trim(line.substr(eq + 1)));
  }
  for (const char* key : {"nx", "ny", "dx", "dy", "x0", "y0"})
    if (!kv.count(key))
      throw PsfError(std::string("sidecar missing key ") + key);

  GridSpec grid;
  grid.nx = static_cast<int>(kv["nx"]);
  grid.ny = static_cast<int>(kv["ny"]);
  grid.dx = kv["dx"];
  grid.dy = kv["dy"];
  grid.x0 = kv["x0"];
  grid.y0 = kv["y0"];
  check_grid(grid);

  std::ifstream csv(csv_path);
  if (!csv) throw PsfError("cannot open PSF grid " + csv_path);
  if (!std::getline(csv, line)) throw PsfError("empty PSF grid file");
  const std::string header = trim(line);
  bool has_imag;
  if (header == "x,y,psi")
    has_imag = false;
  else if (header == "x,y,psi_re,psi_im" || header == "x,y,psi,psi_im")
    has_imag = true;
  else
    throw PsfError("PSF grid header must be x,y,psi[,psi_im], got: " + header);

  std::vector<double> values(static_cast<std::size_t>(grid.nx) * grid.ny, 0.0);
  std::size_t row = 0;
  const double pos_tol = 1e-9 * std::max({1.0, std::fabs(grid.x_max()),
                                          std::fabs(grid.y_max())});
  while (std::getline(csv, line)) {
    if (trim(line).empty()) continue;
    if (row >= values.size()) throw PsfError("PSF grid has too many rows");
    std::stringstream ss(line);
    std::string cell;
    double col[4] = {0, 0, 0, 0};
    int ncol = 0;
    while (std::getline(ss, cell, ',')) {
      if (ncol >= 4) throw PsfError("PSF grid row has too many columns");
      col[ncol++] = std::stod(trim(cell));
    }
    if (ncol != (has_imag ? 4 : 3))
      throw PsfError("PSF grid row has wrong column count");
    const int ix = static_cast<int>(row % grid.nx);
    const int iy = static_cast<int>(row / grid.nx);
    if (std::fabs(col[0] - (grid.x0 + ix * grid.dx)) > pos_tol ||
        std::fabs(col[1] - (grid.y0 + iy * grid.dy)) > pos_tol)
      throw PsfError("PSF grid rows are not in row-major order");
    if (has_imag && col[3] != 0.0)
      throw ComplexAmplitude("PSF grid carries nonzero imaginary amplitudes");
    values[row] = col[2];
    ++row;
  }
  if (row != values.size()) throw PsfError("PSF grid has too few rows");
  return from_grid(grid, std::move(values));
}

const GridSpec& PointSpreadFunction::grid() const {
  if (kind_ != Kind::Sampled)
    throw DomainError("grid(): PSF is not sampled");
  return grid_;
}

double PointSpreadFunction::amplitude(double x, double y) const {
  if (kind_ == Kind::GaussianUnitSigma) return gauss1d(x) * gauss1d(y);
  if (x < grid_.x0 || x > grid_.x_max() || y < grid_.y0 || y > grid_.y_max())
    return 0.0;
  int ix = static_cast<int>((x - grid_.x0) / grid_.dx);
  int iy = static_cast<int>((y - grid_.y0) / grid_.dy);
  ix = std::clamp(ix, 0, grid_.nx - 2);
  iy = std::clamp(iy, 0, grid_.ny - 2);
  const double tx = (x - (grid_.x0 + ix * grid_.dx)) / grid_.dx;
  const double ty = (y - (grid_.y0 + iy * grid_.dy)) / grid_.dy;
  const std::size_t base = static_cast<std::size_t>(iy) * grid_.nx + ix;
  const double v00 = values_[base], v10 = values_[base + 1];
  const double v01 = values_[base + grid_.nx], v11 = values_[base + grid_.nx + 1];
  return v00 * (1 - tx) * (1 - ty) + v10 * tx * (1 - ty) + v01 * (1 - tx) * ty +
         v11 * tx * ty;
}

bool PointSpreadFunction::covers(double x_extent, double y_extent) const {
  if (kind_ == Kind::GaussianUnitSigma) return true;
  return grid_.x0 <= -x_extent && grid_.x_max() >= x_extent &&
         grid_.y0 <= -y_extent && grid_.y_max() >= y_extent;
}

double overlap(const PointSpreadFunction& psf, double d) {
  if (d < 0.0) throw DomainError("overlap: separation must be nonnegative");
  if (d == 0.0) return 1.0;
  if (psf.kind() == PointSpreadFunction::Kind::GaussianUnitSigma)
    return std::exp(-d * d / 8.0);
  return overlap_by_quadrature(psf, d);
}

double overlap_by_quadrature(const PointSpreadFunction& psf, double d) {
  if (d < 0.0) throw DomainError("overlap: separation must be nonnegative");
  if (psf.kind() == PointSpreadFunction::Kind::Sampled) {
    if (d == 0.0) return 1.0;
    const double raw = bilinear_product_integral(psf, d);
    return std::clamp(raw / psf.norm_squared(), -1.0, 1.0);
  }
  const QuadratureConfig& cfg = psf.quadrature();
  const double w = std::max(cfg.half_width, 0.5 * d + cfg.half_width);
  const Box box{-w, w, -cfg.half_width, cfg.half_width};
  const double value = integrate2d(
      [&psf, d](double x, double y) {
        return psf.amplitude(x, y) * psf.amplitude(x - d, y);
      },
      box, cfg);
  return std::clamp(value, -1.0, 1.0);
}

OverlapStats overlap_stats(const PointSpreadFunction& psf, double d) {
  OverlapStats s;
  s.d = d;
  s.delta = overlap(psf, d);
  s.chi = (d == 0.0) ? 1.0 : overlap(psf, 0.5 * d);
  s.lambda_plus = 0.5 * (1.0 + s.delta);
  s.lambda_minus = 1.0 - s.lambda_plus;
  return s;
}

OverlapStats gaussian_overlap_stats(double d) {
  if (d < 0.0) throw DomainError("overlap: separation must be nonnegative");
  OverlapStats s;
  s.d = d;
  s.delta = std::exp(-d * d / 8.0);
  s.chi = std::exp(-d * d / 32.0);
  s.lambda_plus = 0.5 * (1.0 + s.delta);
  s.lambda_minus = 1.0 - s.lambda_plus;
  return s;
}

double direct_image_density(const PointSpreadFunction& psf, Hypothesis h,
                            double d, double x, double y) {
  if (d < 0.0) throw DomainError("density: separation must be nonnegative");
  if (psf.kind() == PointSpreadFunction::Kind::Sampled) {
    const GridSpec& g = psf.grid();
    const bool inside = x >= g.x0 && x <= g.x_max() && y >= g.y0 && y <= g.y_max();
    if (!inside) {
      if (!psf.covers(0.5 * d + 6.0, 6.0))
        throw DomainError("density: point outside a grid that does not cover "
                          "the sources by 6 width units");
      return 0.0;
    }
  }
  if (h == Hypothesis::H1) {
    const double a = psf.amplitude(x, y);
    return a * a;
  }
  const double am = psf.amplitude(x - 0.5 * d, y);
  const double ap = psf.amplitude(x + 0.5 * d, y);
  return 0.5 * (am * am + ap * ap);
}

}  // namespace onevstwo
