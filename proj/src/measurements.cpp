#include "onevstwo/measurements.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace onevstwo {

namespace {

double pow_log_domain(double x, double n) {
  if (n == 0.0) return 1.0;
  if (x == 0.0) return 0.0;
  return std::exp(n * std::log(x));
}

// log cosh z without overflow for |z| up to quadrature extremes.
double log_cosh(double z) {
  z = std::fabs(z);
  return z + std::log1p(std::exp(-2.0 * z)) - M_LN2;
}

struct ScalarMin {
  double x = 0.5;
  double fx = 0.0;
  int evals = 0;
  double width = 0.0;
};

// Golden-section bracketing on [0,1] to width 1e-6, then successive parabolic
// refinement to 1e-10 in s. Endpoints are evaluated and compared explicitly so
// boundary minima are never missed.
template <class F>
ScalarMin minimize_unit_interval(const F& f) {
  constexpr double kGolden = 0.6180339887498949;
  constexpr double kGoldenWidth = 1e-6;
  constexpr double kRefineTol = 1e-10;

  int evals = 0;
  auto eval = [&](double s) {
    ++evals;
    return f(s);
  };

  double a = 0.0, b = 1.0;
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = eval(x1), f2 = eval(x2);
  while (b - a > kGoldenWidth) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = eval(x2);
    }
  }
  double xm = (f1 < f2) ? x1 : x2;
  double fm = std::min(f1, f2);

  // Parabola through (a, b, midpoint) around the bracket.
  double lo = a, hi = b;
  double flo = eval(lo), fhi = eval(hi);
  for (int it = 0; it < 40 && hi - lo > kRefineTol; ++it) {
    const double d1 = (xm - lo) * (fm - fhi);
    const double d2 = (xm - hi) * (fm - flo);
    double step_num = (xm - lo) * d1 - (xm - hi) * d2;
    double step_den = 2.0 * (d1 - d2);
    double cand;
    if (std::fabs(step_den) < 1e-300) {
      cand = 0.5 * (lo + hi);
    } else {
      cand = xm - step_num / step_den;
      if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
    }
    if (std::fabs(cand - xm) < 0.25 * kRefineTol) cand = 0.5 * (lo + hi);
    const double fc = eval(cand);
    if (fc < fm) {
      if (cand < xm) {
        hi = xm;
        fhi = fm;
      } else {
        lo = xm;
        flo = fm;
      }
      xm = cand;
      fm = fc;
    } else {
      if (cand < xm) {
        lo = cand;
        flo = fc;
      } else {
        hi = cand;
        fhi = fc;
      }
    }
  }

  // Explicit endpoint comparison.
  const double f_left = eval(0.0), f_right = eval(1.0);
  ScalarMin r;
  r.x = xm;
  r.fx = fm;
  if (f_left <= r.fx) {
    r.x = 0.0;
    r.fx = f_left;
  }
  if (f_right < r.fx) {
    r.x = 1.0;
    r.fx = f_right;
  }
  r.evals = evals;
  r.width = hi - lo;
  return r;
}

// Builds the ChernoffResult from a Hoelder-integral minimization; collapses to
// the interior-undefined convention when the distributions coincide.
// `unit_slack` allows the sampled-PSF path its interpolation-level mass error.
template <class F>
ChernoffResult chernoff_from_integral(const F& integral, Scheme scheme,
                                      double unit_slack = 1e-9) {
  ScalarMin m = minimize_unit_interval(integral);
  if (m.fx > 1.0 + unit_slack)
    throw OptimizationFailure("chernoff: integral exceeds 1; "
                              "input distributions are not normalized");
  ChernoffResult r;
  r.scheme = scheme;
  r.iterations = m.evals;
  r.tolerance = m.width;
  if (m.fx >= 1.0 - 1e-12) {
    r.exponent = 0.0;
    r.s_star = 0.5;  // flat objective; minimizer undefined
    return r;
  }
  r.exponent = std::max(0.0, -std::log(m.fx));
  r.s_star = m.x;
  return r;
}

// p^s q^(1-s) with the s->0+ / s->1- limit convention at the endpoints, so the
// integral is continuous on [0,1] even for outcomes missing from one support.
double hoelder_term(double p, double q, double s) {
  if (s <= 0.0) return p > 0.0 ? q : 0.0;
  if (s >= 1.0) return q > 0.0 ? p : 0.0;
  if (p <= 0.0 || q <= 0.0) return 0.0;
  return std::exp(s * std::log(p) + (1.0 - s) * std::log(q));
}

bool unconditional_rule_matches_lrt(double stay_prob, long M, double p1,
                                    double p2) {
  if (p2 == 0.0) return true;
  return pow_log_domain(stay_prob, static_cast<double>(M)) <= p1 / p2;
}

// Integrates term(L1, L2) of the two sampled-PSF arrival densities over the
// image plane. Panels are aligned with the grid lines of all three shifted
// amplitude copies, where the integrand is smooth; blind subdivision would
// chase the interpolation kinks instead.
template <class Term>
double sampled_pair_integral(const PointSpreadFunction& psf, double d,
                             const Term& term) {
  const GridSpec& g = psf.grid();
  const double half = 0.5 * d;
  const double lo = g.x0 - half, hi = g.x_max() + half;
  std::vector<double> cuts;
  cuts.reserve(3 * g.nx);
  for (int i = 0; i < g.nx; ++i) {
    const double x = g.x0 + i * g.dx;
    for (double c : {x, x - half, x + half})
      if (c >= lo - 1e-12 && c <= hi + 1e-12) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return b - a < 1e-12; }),
             cuts.end());

  const GaussRule& r = gauss_legendre(5);
  double total = 0.0;
  for (int iy = 0; iy + 1 < g.ny; ++iy) {
    const double ya = g.y0 + iy * g.dy;
    const double cy = ya + 0.5 * g.dy, sy = 0.5 * g.dy;
    for (std::size_t ic = 0; ic + 1 < cuts.size(); ++ic) {
      const double cx = 0.5 * (cuts[ic] + cuts[ic + 1]);
      const double sx = 0.5 * (cuts[ic + 1] - cuts[ic]);
      double cell = 0.0;
      for (std::size_t i = 0; i < 5; ++i) {
        const double x = cx + sx * r.nodes[i];
        double row = 0.0;
        for (std::size_t j = 0; j < 5; ++j) {
          const double y = cy + sy * r.nodes[j];
          const double a1 = psf.amplitude(x, y);
          const double am = psf.amplitude(x - half, y);
          const double ap = psf.amplitude(x + half, y);
          row += r.weights[j] * term(a1 * a1, 0.5 * (am * am + ap * ap));
        }
        cell += r.weights[i] * row;
      }
      total += cell * sx * sy;
    }
  }
  return total;
}

}  // namespace

ErrorReport bspade_error(const OverlapStats& stats, double p1, double p2,
                         const Conditioning& cond) {
  validate_priors(p1, p2);
  ErrorReport r;
  r.scheme = Scheme::BSpade;
  r.conditioning = cond;
  r.alpha = 0.0;
  const double chi_sq = stats.chi * stats.chi;
  if (const auto* cl = std::get_if<ConditionalOnL>(&cond)) {
    if (cl->photons < 0) throw DomainError("bspade_error: L must be >= 0");
    const double beta =
        pow_log_domain(chi_sq, static_cast<double>(cl->photons));
    r.beta = beta;
    r.p_error = p2 * beta;
    r.rule_matches_lrt = p2 == 0.0 || beta <= p1 / p2;
  } else {
    const auto& um = std::get<UnconditionalOnM>(cond);
    Scenario probe{stats.d, p1, p2, um.epsilon, um.modes};
    probe.validate();
    const double stay = 1.0 - um.epsilon * (1.0 - chi_sq);
    const double beta = pow_log_domain(stay, static_cast<double>(um.modes));
    r.beta = beta;
    r.p_error = p2 * beta;
    r.rule_matches_lrt = unconditional_rule_matches_lrt(stay, um.modes, p1, p2);
    r.model_warning = probe.high_epsilon();
  }
  return r;
}

ErrorReport sliver_error(const OverlapStats& stats, double p1, double p2,
                         const Conditioning& cond) {
  validate_priors(p1, p2);
  ErrorReport r;
  r.scheme = Scheme::Sliver;
  r.conditioning = cond;
  r.alpha = 0.0;
  if (const auto* cl = std::get_if<ConditionalOnL>(&cond)) {
    if (cl->photons < 0) throw DomainError("sliver_error: L must be >= 0");
    const double beta =
        pow_log_domain(stats.lambda_plus, static_cast<double>(cl->photons));
    r.beta = beta;
    r.p_error = p2 * beta;
    r.rule_matches_lrt = p2 == 0.0 || beta <= p1 / p2;
  } else {
    const auto& um = std::get<UnconditionalOnM>(cond);
    Scenario probe{stats.d, p1, p2, um.epsilon, um.modes};
    probe.validate();
    const double stay = 1.0 - um.epsilon * (1.0 - stats.lambda_plus);
    const double beta = pow_log_domain(stay, static_cast<double>(um.modes));
    r.beta = beta;
    r.p_error = p2 * beta;
    r.rule_matches_lrt = unconditional_rule_matches_lrt(stay, um.modes, p1, p2);
    r.model_warning = probe.high_epsilon();
  }
  return r;
}

ChernoffResult bspade_exponent(const OverlapStats& stats) {
  if (stats.chi < 0.0) throw DomainError("bspade_exponent: negative chi");
  ChernoffResult r;
  r.scheme = Scheme::BSpade;
  r.s_star = 0.5;
  r.exponent = stats.chi == 0.0 ? std::numeric_limits<double>::infinity()
                                : std::fabs(2.0 * std::log(stats.chi));
  return r;
}

ChernoffResult sliver_exponent(const OverlapStats& stats) {
  if (stats.lambda_plus <= 0.0)
    throw DomainError("sliver_exponent: lambda_+ must be positive");
  ChernoffResult r;
  r.scheme = Scheme::Sliver;
  r.s_star = 0.5;
  r.exponent = std::fabs(std::log(stats.lambda_plus));
  return r;
}

ChernoffResult classical_chernoff(std::span<const double> p,
                                  std::span<const double> q) {
  if (p.size() != q.size() || p.empty())
    throw DomainError("classical_chernoff: outcome spaces differ");
  double sp = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0)
      throw DomainError("classical_chernoff: negative probability");
    sp += p[i];
    sq += q[i];
  }
  if (std::fabs(sp - 1.0) > 1e-9 || std::fabs(sq - 1.0) > 1e-9)
    throw OptimizationFailure("classical_chernoff: distributions unnormalized");

  auto integral = [&](double s) {
    double c = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      c += hoelder_term(p[i], q[i], s);
    return c;
  };
  return chernoff_from_integral(integral, Scheme::QuantumLimit);
}

ChernoffResult classical_chernoff(const Density2d& density1,
                                  const Density2d& density2, const Box& box,
                                  const QuadratureConfig& cfg) {
  auto integral = [&](double s) {
    return integrate2d(
        [&](double x, double y) {
          return hoelder_term(density1(x, y), density2(x, y), s);
        },
        box, cfg);
  };
  return chernoff_from_integral(integral, Scheme::QuantumLimit);
}

double gaussian_direct_chernoff_integral(double s, double d, int order) {
  if (order <= 0) order = d > 6.0 ? 128 : 64;
  const double half_d = 0.5 * d;
  const double e = normal_expectation(
      [s, half_d](double x) { return std::exp(s * log_cosh(x * half_d)); },
      order);
  return std::exp(-s * d * d / 8.0) * e;
}

ChernoffResult direct_imaging_exponent(const PointSpreadFunction& psf,
                                       double d) {
  if (d < 0.0) throw DomainError("direct_imaging_exponent: d must be >= 0");
  if (d == 0.0) {
    ChernoffResult r;
    r.scheme = Scheme::DirectImaging;
    r.exponent = 0.0;
    r.s_star = 0.5;
    return r;
  }
  if (psf.kind() == PointSpreadFunction::Kind::GaussianUnitSigma) {
    auto integral = [d](double s) {
      return gaussian_direct_chernoff_integral(s, d);
    };
    ChernoffResult r = chernoff_from_integral(integral, Scheme::DirectImaging);
    r.scheme = Scheme::DirectImaging;
    return r;
  }
  // Chernoff parameter attached to the two-source density, matching the
  // Gauss-Hermite path.
  auto integral = [&psf, d](double s) {
    return sampled_pair_integral(psf, d, [s](double l1, double l2) {
      return hoelder_term(l2, l1, s);
    });
  };
  ChernoffResult r =
      chernoff_from_integral(integral, Scheme::DirectImaging, 1e-3);
  r.scheme = Scheme::DirectImaging;
  return r;
}

double bhattacharyya(const PointSpreadFunction& psf, double d) {
  if (d < 0.0) throw DomainError("bhattacharyya: d must be >= 0");
  if (d == 0.0) return 1.0;  // identical densities
  if (psf.kind() == PointSpreadFunction::Kind::GaussianUnitSigma)
    return std::min(1.0, gaussian_direct_chernoff_integral(0.5, d));
  return bhattacharyya_by_quadrature(psf, d);
}

double bhattacharyya_by_quadrature(const PointSpreadFunction& psf, double d) {
  if (d < 0.0) throw DomainError("bhattacharyya: d must be >= 0");
  if (psf.kind() == PointSpreadFunction::Kind::Sampled) {
    const double value =
        sampled_pair_integral(psf, d, [](double l1, double l2) {
          return std::sqrt(l1 * l2);
        });
    return std::min(1.0, value);
  }
  const QuadratureConfig& cfg = psf.quadrature();
  const double w = 0.5 * d + cfg.half_width;
  const Box box{-w, w, -cfg.half_width, cfg.half_width};
  const double value = integrate2d(
      [&psf, d](double x, double y) {
        return std::sqrt(direct_image_density(psf, Hypothesis::H1, d, x, y) *
                         direct_image_density(psf, Hypothesis::H2, d, x, y));
      },
      box, cfg);
  return std::min(1.0, value);
}

DirectImagingBounds direct_imaging_bounds(double coefficient, double exponent,
                                          long L) {
  if (!(coefficient > 0.0 && coefficient <= 1.0))
    throw DomainError("direct_imaging_bounds: F must lie in (0, 1]");
  if (exponent < 0.0)
    throw DomainError("direct_imaging_bounds: exponent must be >= 0");
  if (L < 1) throw DomainError("direct_imaging_bounds: L must be positive");
  DirectImagingBounds b;
  b.coefficient = coefficient;
  const double f2l =
      pow_log_domain(coefficient, 2.0 * static_cast<double>(L));
  // 1 - sqrt(1-z) = z / (1 + sqrt(1-z)): no cancellation for tiny F^(2L).
  b.lower = 0.5 * f2l / (1.0 + std::sqrt(std::max(0.0, 1.0 - f2l)));
  b.upper = 0.5 * std::exp(-static_cast<double>(L) * exponent);
  return b;
}

DirectImagingBounds direct_imaging_bounds_unconditional(double coefficient,
                                                        double exponent,
                                                        double epsilon,
                                                        long M) {
  if (!(coefficient > 0.0 && coefficient <= 1.0))
    throw DomainError("direct_imaging_bounds: F must lie in (0, 1]");
  if (exponent < 0.0)
    throw DomainError("direct_imaging_bounds: exponent must be >= 0");
  if (!(epsilon > 0.0 && epsilon < 1.0) || M < 1)
    throw DomainError("direct_imaging_bounds: bad epsilon or M");
  DirectImagingBounds b;
  b.coefficient = coefficient;
  // Upper mixture telescopes to a single power via the binomial theorem.
  b.upper = 0.5 * pow_log_domain(1.0 - epsilon * (1.0 - std::exp(-exponent)),
                                 static_cast<double>(M));
  double lower = 0.0;
  for (long L = 0; L <= M; ++L) {
    const double logw = std::lgamma(M + 1.0) - std::lgamma(L + 1.0) -
                        std::lgamma(M - L + 1.0) + L * std::log(epsilon) +
                        (M - L) * std::log1p(-epsilon);
    const double w = std::exp(logw);
    if (L > 0) {
      const double f2l =
          pow_log_domain(coefficient, 2.0 * static_cast<double>(L));
      lower += w * 0.5 * f2l / (1.0 + std::sqrt(std::max(0.0, 1.0 - f2l)));
    } else {
      lower += w * 0.5;  // no photons: either hypothesis equally likely
    }
    if (w < 1e-18 && L > static_cast<long>((M + 1) * epsilon)) break;
  }
  b.lower = std::min(lower, b.upper);
  return b;
}

}  // namespace onevstwo
