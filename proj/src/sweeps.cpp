#include "onevstwo/sweeps.hpp"

#include <cmath>
#include <limits>

#include "onevstwo/measurements.hpp"
#include "onevstwo/quantum.hpp"

namespace onevstwo {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> numeric_row(std::initializer_list<double> values) {
  std::vector<std::string> row;
  row.reserve(values.size());
  for (double v : values) row.push_back(format_csv_value(v));
  return row;
}

}  // namespace

std::vector<double> sweep_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw DomainError("sweep: step must be positive");
  if (hi < lo) throw DomainError("sweep: empty range");
  const long count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(count);
  for (long i = 0; i < count; ++i) grid.push_back(lo + i * step);
  return grid;
}

CsvTable exponents_table(const PointSpreadFunction& psf, double d_min,
                         double d_max, double d_step) {
  CsvTable t;
  t.header = {"d", "xi_quantum", "xi_bspade", "xi_sliver", "xi_direct"};
  for (double d : sweep_grid(d_min, d_max, d_step)) {
    const OverlapStats stats = overlap_stats(psf, d);
    t.rows.push_back(numeric_row({d, quantum_chernoff(stats).exponent,
                                  bspade_exponent(stats).exponent,
                                  sliver_exponent(stats).exponent,
                                  direct_imaging_exponent(psf, d).exponent}));
  }
  return t;
}

CsvTable conditional_table(const PointSpreadFunction& psf, long photons,
                           double p1, double d2_min, double d2_max,
                           double d2_step) {
  if (photons < 1) throw DomainError("conditional sweep: L must be positive");
  validate_priors(p1, 1.0 - p1);
  const double p2 = 1.0 - p1;
  const bool equal_priors = p1 == 0.5;
  CsvTable t;
  t.header = {"d_squared",      "p_min",         "p_bspade",
              "p_sliver",       "p_direct_lower", "p_direct_upper"};
  for (double d2 : sweep_grid(d2_min, d2_max, d2_step)) {
    const double d = std::sqrt(std::max(0.0, d2));
    const OverlapStats stats = overlap_stats(psf, d);
    double lower = kNan, upper = kNan;
    if (equal_priors) {
      const DirectImagingBounds b = direct_imaging_bounds(
          bhattacharyya(psf, d), direct_imaging_exponent(psf, d).exponent,
          photons);
      lower = b.lower;
      upper = b.upper;
    }
    t.rows.push_back(numeric_row(
        {d2, min_error_conditional(stats, p1, p2, photons).p_error,
         bspade_error(stats, p1, p2, ConditionalOnL{photons}).p_error,
         sliver_error(stats, p1, p2, ConditionalOnL{photons}).p_error, lower,
         upper}));
  }
  return t;
}

CsvTable photons_table(const PointSpreadFunction& psf, double d, double p1,
                       long l_min, long l_max) {
  if (l_min < 0 || l_max < l_min)
    throw DomainError("photon sweep: need 0 <= L_min <= L_max");
  validate_priors(p1, 1.0 - p1);
  const double p2 = 1.0 - p1;
  const bool equal_priors = p1 == 0.5;
  const OverlapStats stats = overlap_stats(psf, d);
  double coeff = kNan, exponent = kNan;
  if (equal_priors) {
    coeff = bhattacharyya(psf, d);
    exponent = direct_imaging_exponent(psf, d).exponent;
  }
  CsvTable t;
  t.header = {"L",        "p_min",          "p_bspade",
              "p_sliver", "p_direct_lower", "p_direct_upper"};
  for (long L = l_min; L <= l_max; ++L) {
    double lower = kNan, upper = kNan;
    if (equal_priors) {
      if (L == 0) {
        lower = upper = 0.5;  // no photons carry no information
      } else {
        const DirectImagingBounds b = direct_imaging_bounds(coeff, exponent, L);
        lower = b.lower;
        upper = b.upper;
      }
    }
    std::vector<std::string> row;
    row.push_back(std::to_string(L));
    for (const std::string& cell : numeric_row(
        {min_error_conditional(stats, p1, p2, L).p_error,
         bspade_error(stats, p1, p2, ConditionalOnL{L}).p_error,
         sliver_error(stats, p1, p2, ConditionalOnL{L}).p_error, lower,
         upper}))
      row.push_back(cell);
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable unconditional_table(const PointSpreadFunction& psf, double epsilon,
                             const std::vector<long>& mode_counts,
                             double d_min, double d_max, double d_step,
                             double p1) {
  if (mode_counts.empty())
    throw DomainError("unconditional sweep: need at least one mode count");
  validate_priors(p1, 1.0 - p1);
  const double p2 = 1.0 - p1;
  CsvTable t;
  t.header = {"d", "M", "p_min_uncond", "p_bspade_uncond", "p_sliver_uncond"};
  const std::vector<double> grid = sweep_grid(d_min, d_max, d_step);
  for (long modes : mode_counts) {
    for (double d : grid) {
      const OverlapStats stats = overlap_stats(psf, d);
      const Scenario scenario{d, p1, p2, epsilon, modes};
      const UnconditionalOnM cond{modes, epsilon};
      std::vector<std::string> row;
      row.push_back(format_csv_value(d));
      row.push_back(std::to_string(modes));
      for (const std::string& cell : numeric_row(
               {min_error_unconditional(stats, scenario).p_error,
                bspade_error(stats, p1, p2, cond).p_error,
                sliver_error(stats, p1, p2, cond).p_error}))
        row.push_back(cell);
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

CsvTable simulate_table(const PointSpreadFunction& psf,
                        const SimulateConfig& config) {
  if (config.schemes.empty())
    throw DomainError("simulate: need at least one scheme");
  const Scenario& sc = config.scenario;
  sc.validate();
  const OverlapStats stats = overlap_stats(psf, sc.d);

  CsvTable t;
  t.header = {"scheme",        "rule",        "conditioning",
              "d",             "L",           "M",
              "epsilon",       "p1",          "trials",
              "seed",          "rng_id",      "empirical_alpha",
              "alpha_lo",      "alpha_hi",    "empirical_beta",
              "beta_lo",       "beta_hi",     "empirical_p_error",
              "p_error_lo",    "p_error_hi",  "analytic_p_error",
              "analytic_lower", "analytic_upper", "in_ci"};

  for (Scheme scheme : config.schemes) {
    MonteCarloSummary s;
    if (config.conditional) {
      s = estimate_error_conditional(sc, stats, &psf, scheme, config.rule,
                                     config.photons, config.trials, config.seed,
                                     config.threads);
    } else {
      s = estimate_error(sc, stats, &psf, scheme, config.rule, config.trials,
                         config.seed, config.threads);
    }

    double analytic = kNan, lower = kNan, upper = kNan;
    bool in_ci;
    if (scheme == Scheme::DirectImaging) {
      if (sc.p1 == 0.5) {
        const double coeff = bhattacharyya(psf, sc.d);
        const double exponent = direct_imaging_exponent(psf, sc.d).exponent;
        DirectImagingBounds b;
        if (config.conditional && config.photons == 0) {
          b.lower = b.upper = 0.5;
        } else if (config.conditional) {
          b = direct_imaging_bounds(coeff, exponent, config.photons);
        } else {
          b = direct_imaging_bounds_unconditional(coeff, exponent, sc.epsilon,
                                                  sc.modes);
        }
        lower = b.lower;
        upper = b.upper;
      }
      // Bracket check padded by three standard errors of the estimate.
      const double n = static_cast<double>(s.trials);
      const double se = std::sqrt(
          sc.p1 * sc.p1 * s.alpha.value * (1.0 - s.alpha.value) / n +
          sc.p2 * sc.p2 * s.beta.value * (1.0 - s.beta.value) / n);
      in_ci = !std::isnan(lower) && s.p_error >= lower - 3.0 * se &&
              s.p_error <= upper + 3.0 * se;
    } else {
      const Conditioning cond =
          config.conditional
              ? Conditioning{ConditionalOnL{config.photons}}
              : Conditioning{UnconditionalOnM{sc.modes, sc.epsilon}};
      const ErrorReport report =
          scheme == Scheme::BSpade
              ? bspade_error(stats, sc.p1, sc.p2, cond)
              : sliver_error(stats, sc.p1, sc.p2, cond);
      analytic = lower = upper = report.p_error;
      in_ci = analytic >= s.p_error_lo && analytic <= s.p_error_hi;
    }

    std::vector<std::string> row;
    row.push_back(scheme_name(scheme));
    row.push_back(config.rule == DecisionRule::Simplified ? "simplified"
                                                          : "lrt");
    row.push_back(config.conditional ? "conditional" : "unconditional");
    row.push_back(format_csv_value(sc.d));
    row.push_back(config.conditional ? std::to_string(config.photons) : "na");
    row.push_back(config.conditional ? "na" : std::to_string(sc.modes));
    row.push_back(config.conditional ? "na" : format_csv_value(sc.epsilon));
    row.push_back(format_csv_value(sc.p1));
    row.push_back(std::to_string(config.trials));
    row.push_back(std::to_string(config.seed));
    row.push_back(s.rng_id);
    row.push_back(format_csv_value(s.alpha.value));
    row.push_back(format_csv_value(s.alpha.lo));
    row.push_back(format_csv_value(s.alpha.hi));
    row.push_back(format_csv_value(s.beta.value));
    row.push_back(format_csv_value(s.beta.lo));
    row.push_back(format_csv_value(s.beta.hi));
    row.push_back(format_csv_value(s.p_error));
    row.push_back(format_csv_value(s.p_error_lo));
    row.push_back(format_csv_value(s.p_error_hi));
    row.push_back(format_csv_value(analytic));
    row.push_back(format_csv_value(lower));
    row.push_back(format_csv_value(upper));
    row.push_back(in_ci ? "true" : "false");
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace onevstwo
