#include "onevstwo/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace onevstwo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Inverse-CDF sampler for a sampled PSF's arrival density |psi|^2: the
// x-marginal over grid nodes, then the y-column interpolated bilinearly at the
// drawn x. Node densities are treated as piecewise linear.
class GridSampler {
 public:
  explicit GridSampler(const PointSpreadFunction& psf)
      : grid_(psf.grid()), sq_(psf.values().size()) {
    const auto& v = psf.values();
    for (std::size_t i = 0; i < v.size(); ++i) sq_[i] = v[i] * v[i];
    marginal_x_.assign(grid_.nx, 0.0);
    for (int ix = 0; ix < grid_.nx; ++ix) {
      double col = 0.0;
      for (int iy = 0; iy < grid_.ny; ++iy) {
        const double w = (iy == 0 || iy == grid_.ny - 1) ? 0.5 : 1.0;
        col += w * sq_[static_cast<std::size_t>(iy) * grid_.nx + ix];
      }
      marginal_x_[ix] = col * grid_.dy;
    }
    cum_x_ = cumulative(marginal_x_, grid_.dx);
  }

  std::array<double, 2> sample(PhiloxRng& rng) const {
    double tx;  // continuous x index in [0, nx-1]
    const double x =
        draw_linear(marginal_x_, cum_x_, grid_.x0, grid_.dx, rng.uniform(), &tx);
    const int ix = std::min(static_cast<int>(tx), grid_.nx - 2);
    const double frac = tx - ix;
    std::vector<double> col(grid_.ny);
    for (int iy = 0; iy < grid_.ny; ++iy) {
      const std::size_t base = static_cast<std::size_t>(iy) * grid_.nx + ix;
      col[iy] = (1.0 - frac) * sq_[base] + frac * sq_[base + 1];
    }
    const std::vector<double> cum = cumulative(col, grid_.dy);
    const double y = draw_linear(col, cum, grid_.y0, grid_.dy, rng.uniform(),
                                 nullptr);
    return {x, y};
  }

 private:
  static std::vector<double> cumulative(const std::vector<double>& f,
                                        double step) {
    std::vector<double> cum(f.size(), 0.0);
    for (std::size_t i = 1; i < f.size(); ++i)
      cum[i] = cum[i - 1] + 0.5 * (f[i - 1] + f[i]) * step;
    return cum;
  }

  // Inverse CDF of a piecewise-linear density given node values and their
  // cumulative masses.
  static double draw_linear(const std::vector<double>& f,
                            const std::vector<double>& cum, double origin,
                            double step, double u, double* index_out) {
    const double target = u * cum.back();
    const auto it = std::upper_bound(cum.begin(), cum.end(), target);
    const std::size_t k = std::min<std::size_t>(
        it == cum.begin() ? 0 : (it - cum.begin() - 1), f.size() - 2);
    const double local = (target - cum[k]) / step;  // mass inside the segment
    const double f0 = f[k], slope = f[k + 1] - f[k];
    double t;
    if (std::fabs(slope) < 1e-300) {
      t = f0 > 0.0 ? local / f0 : 0.5;
    } else {
      const double disc = std::max(0.0, f0 * f0 + 2.0 * slope * local);
      t = (std::sqrt(disc) - f0) / slope;
    }
    t = std::clamp(t, 0.0, 1.0);
    if (index_out) *index_out = static_cast<double>(k) + t;
    return origin + (static_cast<double>(k) + t) * step;
  }

  GridSpec grid_;
  std::vector<double> sq_;
  std::vector<double> marginal_x_;
  std::vector<double> cum_x_;
};

// Per-run constants shared by every trial.
struct TrialContext {
  Scheme scheme;
  DecisionRule rule;
  double d = 0.0;
  double epsilon = 0.0;
  long modes = 0;
  long photons = -1;  // >= 0 switches to the conditional layout
  double click_prob_h2 = 0.0;    // per-photon click probability under H2
  double log_quiet_factor = 0.0; // per-photon log LR of a no-click outcome
  double log_threshold = 0.0;    // log(p1/p2)
  bool always_h1 = false;        // degenerate priors
  bool always_h2 = false;
  const PointSpreadFunction* psf = nullptr;
  const GridSampler* sampler = nullptr;
  bool gaussian_psf = false;
};

double log_cosh(double z) {
  z = std::fabs(z);
  return z + std::log1p(std::exp(-2.0 * z)) - M_LN2;
}

TrialContext make_context(const Scenario& scenario, const OverlapStats& stats,
                          const PointSpreadFunction* psf, Scheme scheme,
                          DecisionRule rule, long photons) {
  scenario.validate();
  if (scheme == Scheme::QuantumLimit)
    throw DomainError("montecarlo: the quantum limit is not a measurement");
  if (scheme == Scheme::DirectImaging) {
    if (rule == DecisionRule::Simplified)
      throw DomainError(
          "montecarlo: direct imaging has no simplified click rule");
    if (psf == nullptr)
      throw DomainError("montecarlo: direct imaging requires a PSF");
  }
  if (photons > 1000000)
    throw DomainError("montecarlo: photon count out of range");

  TrialContext ctx;
  ctx.scheme = scheme;
  ctx.rule = rule;
  ctx.d = scenario.d;
  ctx.epsilon = scenario.epsilon;
  ctx.modes = scenario.modes;
  ctx.photons = photons;
  if (scheme == Scheme::BSpade) {
    const double chi_sq = stats.chi * stats.chi;
    ctx.click_prob_h2 = 1.0 - chi_sq;
    ctx.log_quiet_factor = chi_sq > 0.0 ? std::log(chi_sq) : -kInf;
  } else if (scheme == Scheme::Sliver) {
    ctx.click_prob_h2 = stats.lambda_minus;
    ctx.log_quiet_factor =
        stats.lambda_plus > 0.0 ? std::log(stats.lambda_plus) : -kInf;
  }
  if (scenario.p2 == 0.0) {
    ctx.always_h1 = true;
  } else if (scenario.p1 == 0.0) {
    ctx.always_h2 = true;
  } else {
    ctx.log_threshold = std::log(scenario.p1 / scenario.p2);
  }
  ctx.psf = psf;
  ctx.gaussian_psf =
      psf != nullptr &&
      psf->kind() == PointSpreadFunction::Kind::GaussianUnitSigma;
  return ctx;
}

// Per-photon log likelihood ratio log(Lambda2 / Lambda1) of an arrival.
double position_log_ratio(const TrialContext& ctx, double x, double y) {
  if (ctx.gaussian_psf) return -ctx.d * ctx.d / 8.0 + log_cosh(x * ctx.d / 2.0);
  const double l1 = direct_image_density(*ctx.psf, Hypothesis::H1, ctx.d, x, y);
  const double l2 = direct_image_density(*ctx.psf, Hypothesis::H2, ctx.d, x, y);
  if (l1 <= 0.0 && l2 <= 0.0) return 0.0;
  if (l1 <= 0.0) return kInf;
  if (l2 <= 0.0) return -kInf;
  return std::log(l2 / l1);
}

std::array<double, 2> sample_position(const TrialContext& ctx, Hypothesis truth,
                                      PhiloxRng& rng) {
  double center = 0.0;
  if (truth == Hypothesis::H2)
    center = rng.uniform() < 0.5 ? -0.5 * ctx.d : 0.5 * ctx.d;
  if (ctx.gaussian_psf)
    return {center + rng.normal(), rng.normal()};
  std::array<double, 2> p = ctx.sampler->sample(rng);
  p[0] += center;
  return p;
}

// Simulates the photon record of one trial. Positions are appended only when
// `positions` is non-null; the decision statistics (clicks or log LR) are
// accumulated either way.
struct TrialRecord {
  long detected = 0;
  long clicks = 0;
  double log_lr = 0.0;  // direct imaging only
};

TrialRecord run_photons(const TrialContext& ctx, Hypothesis truth,
                        PhiloxRng& rng,
                        std::vector<std::array<double, 2>>* positions) {
  TrialRecord rec;
  const long draws = ctx.photons >= 0 ? ctx.photons : ctx.modes;
  for (long i = 0; i < draws; ++i) {
    if (ctx.photons < 0 && !rng.bernoulli(ctx.epsilon)) continue;
    ++rec.detected;
    if (ctx.scheme == Scheme::DirectImaging) {
      const std::array<double, 2> p = sample_position(ctx, truth, rng);
      rec.log_lr += position_log_ratio(ctx, p[0], p[1]);
      if (positions) positions->push_back(p);
    } else {
      // Complement-mode / antisymmetric-port click; impossible under H1.
      if (truth == Hypothesis::H2 && rng.bernoulli(ctx.click_prob_h2))
        ++rec.clicks;
    }
  }
  return rec;
}

Hypothesis decide(const TrialContext& ctx, const TrialRecord& rec) {
  if (ctx.rule == DecisionRule::Simplified)
    return rec.clicks > 0 ? Hypothesis::H2 : Hypothesis::H1;
  if (ctx.always_h1) return Hypothesis::H1;
  if (ctx.always_h2) return Hypothesis::H2;
  double log_lr;
  if (ctx.scheme == Scheme::DirectImaging) {
    log_lr = rec.log_lr;
  } else if (rec.clicks > 0) {
    return Hypothesis::H2;  // zero likelihood under H1
  } else {
    log_lr = rec.detected * ctx.log_quiet_factor;
  }
  // Ties favor the one-source hypothesis.
  return log_lr > ctx.log_threshold ? Hypothesis::H2 : Hypothesis::H1;
}

std::uint64_t substream(long trial, Hypothesis truth) {
  return (static_cast<std::uint64_t>(trial) << 1) |
         (truth == Hypothesis::H2 ? 1u : 0u);
}

bool trial_is_error(const TrialContext& ctx, Hypothesis truth, long trial,
                    std::uint64_t seed) {
  PhiloxRng rng(seed, substream(trial, truth));
  const TrialRecord rec = run_photons(ctx, truth, rng, nullptr);
  return decide(ctx, rec) != truth;
}

std::uint64_t run_stratum_serial(const TrialContext& ctx, Hypothesis truth,
                                 long trials, std::uint64_t seed) {
  std::uint64_t wrong = 0;
  for (long t = 0; t < trials; ++t)
    wrong += trial_is_error(ctx, truth, t, seed) ? 1u : 0u;
  return wrong;
}

std::uint64_t run_stratum_parallel(const TrialContext& ctx, Hypothesis truth,
                                   long trials, std::uint64_t seed,
                                   int threads) {
#ifdef _OPENMP
  std::uint64_t wrong = 0;
  if (threads > 0) {
#pragma omp parallel for schedule(static) reduction(+ : wrong) \
    num_threads(threads)
    for (long t = 0; t < trials; ++t)
      wrong += trial_is_error(ctx, truth, t, seed) ? 1u : 0u;
  } else {
#pragma omp parallel for schedule(static) reduction(+ : wrong)
    for (long t = 0; t < trials; ++t)
      wrong += trial_is_error(ctx, truth, t, seed) ? 1u : 0u;
  }
  return wrong;
#else
  (void)threads;
  return run_stratum_serial(ctx, truth, trials, seed);
#endif
}

std::uint64_t run_stratum(const TrialContext& ctx, Hypothesis truth,
                          long trials, std::uint64_t seed, int threads) {
  if (threads == 1) return run_stratum_serial(ctx, truth, trials, seed);
  return run_stratum_parallel(ctx, truth, trials, seed, threads);
}

MonteCarloSummary run_estimate(const Scenario& scenario, TrialContext ctx,
                               long trials, std::uint64_t seed, int threads) {
  if (trials < 1) throw DomainError("montecarlo: trials must be positive");

  std::unique_ptr<GridSampler> sampler;
  if (ctx.scheme == Scheme::DirectImaging && !ctx.gaussian_psf) {
    sampler = std::make_unique<GridSampler>(*ctx.psf);
    ctx.sampler = sampler.get();
  }

  const std::uint64_t wrong_h1 =
      run_stratum(ctx, Hypothesis::H1, trials, seed, threads);
  const std::uint64_t wrong_h2 =
      run_stratum(ctx, Hypothesis::H2, trials, seed, threads);

  MonteCarloSummary s;
  s.trials = trials;
  s.seed = seed;
  s.rng_id = PhiloxRng::kId;
  s.alpha = wilson_interval(wrong_h1, static_cast<std::uint64_t>(trials));
  s.beta = wilson_interval(wrong_h2, static_cast<std::uint64_t>(trials));
  s.p_error = scenario.p1 * s.alpha.value + scenario.p2 * s.beta.value;
  s.p_error_lo = scenario.p1 * s.alpha.lo + scenario.p2 * s.beta.lo;
  s.p_error_hi = scenario.p1 * s.alpha.hi + scenario.p2 * s.beta.hi;
  return s;
}

}  // namespace

RateEstimate wilson_interval(std::uint64_t count, std::uint64_t n) {
  if (n == 0) throw DomainError("wilson_interval: empty sample");
  if (count > n) throw DomainError("wilson_interval: count exceeds sample");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(count) / nn;
  RateEstimate r;
  r.value = p;
  if (count == 0) {
    r.lo = 0.0;
    r.hi = std::min(1.0, 3.0 / nn);
    return r;
  }
  if (count == n) {
    r.lo = std::max(0.0, 1.0 - 3.0 / nn);
    r.hi = 1.0;
    return r;
  }
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  r.lo = std::max(0.0, center - half);
  r.hi = std::min(1.0, center + half);
  return r;
}

TrialOutcome simulate_trial(const Scenario& scenario, const OverlapStats& stats,
                            const PointSpreadFunction* psf, Scheme scheme,
                            DecisionRule rule, Hypothesis truth,
                            PhiloxRng& rng) {
  TrialContext ctx = make_context(scenario, stats, psf, scheme, rule, -1);
  std::unique_ptr<GridSampler> sampler;
  if (scheme == Scheme::DirectImaging && !ctx.gaussian_psf) {
    sampler = std::make_unique<GridSampler>(*psf);
    ctx.sampler = sampler.get();
  }
  TrialOutcome out;
  out.truth = truth;
  const TrialRecord rec = run_photons(ctx, truth, rng, &out.positions);
  out.detected_photons = rec.detected;
  out.scheme_clicks = rec.clicks;
  out.decision = decide(ctx, rec);
  return out;
}

TrialOutcome simulate_trial_conditional(const Scenario& scenario,
                                        const OverlapStats& stats,
                                        const PointSpreadFunction* psf,
                                        Scheme scheme, DecisionRule rule,
                                        Hypothesis truth, long photons,
                                        PhiloxRng& rng) {
  if (photons < 0)
    throw DomainError("simulate_trial_conditional: L must be >= 0");
  TrialContext ctx = make_context(scenario, stats, psf, scheme, rule, photons);
  std::unique_ptr<GridSampler> sampler;
  if (scheme == Scheme::DirectImaging && !ctx.gaussian_psf) {
    sampler = std::make_unique<GridSampler>(*psf);
    ctx.sampler = sampler.get();
  }
  TrialOutcome out;
  out.truth = truth;
  const TrialRecord rec = run_photons(ctx, truth, rng, &out.positions);
  out.detected_photons = rec.detected;
  out.scheme_clicks = rec.clicks;
  out.decision = decide(ctx, rec);
  return out;
}

MonteCarloSummary estimate_error(const Scenario& scenario,
                                 const OverlapStats& stats,
                                 const PointSpreadFunction* psf, Scheme scheme,
                                 DecisionRule rule, long trials,
                                 std::uint64_t seed, int threads) {
  TrialContext ctx = make_context(scenario, stats, psf, scheme, rule, -1);
  return run_estimate(scenario, ctx, trials, seed, threads);
}

MonteCarloSummary estimate_error_conditional(const Scenario& scenario,
                                             const OverlapStats& stats,
                                             const PointSpreadFunction* psf,
                                             Scheme scheme, DecisionRule rule,
                                             long photons, long trials,
                                             std::uint64_t seed, int threads) {
  if (photons < 0)
    throw DomainError("estimate_error_conditional: L must be >= 0");
  TrialContext ctx =
      make_context(scenario, stats, psf, scheme, rule, photons);
  return run_estimate(scenario, ctx, trials, seed, threads);
}

}  // namespace onevstwo
