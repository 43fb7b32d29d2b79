#include <doctest.h>

#include <cmath>

#include "onevstwo/measurements.hpp"
#include "onevstwo/montecarlo.hpp"
#include "onevstwo/psf.hpp"
#include "onevstwo/quantum.hpp"

using namespace onevstwo;

namespace {

const Scenario kAt2{2.0, 0.5, 0.5, 0.01, 1000};

bool same_summary(const MonteCarloSummary& a, const MonteCarloSummary& b) {
  return a.trials == b.trials && a.alpha.value == b.alpha.value &&
         a.alpha.lo == b.alpha.lo && a.alpha.hi == b.alpha.hi &&
         a.beta.value == b.beta.value && a.beta.lo == b.beta.lo &&
         a.beta.hi == b.beta.hi && a.p_error == b.p_error &&
         a.p_error_lo == b.p_error_lo && a.p_error_hi == b.p_error_hi;
}

}  // namespace

TEST_CASE("wilson intervals") {
  const RateEstimate r = wilson_interval(10, 100);
  CHECK(r.value == 0.1);
  CHECK(r.lo == doctest::Approx(0.0552291370606751).epsilon(1e-12));
  CHECK(r.hi == doctest::Approx(0.17436566150491345).epsilon(1e-12));

  const RateEstimate half = wilson_interval(50, 100);
  CHECK(half.lo == doctest::Approx(0.4038315303659956).epsilon(1e-12));
  CHECK(half.hi == doctest::Approx(0.5961684696340044).epsilon(1e-12));

  // zero and full counts: rule of three
  const RateEstimate zero = wilson_interval(0, 100);
  CHECK(zero.value == 0.0);
  CHECK(zero.lo == 0.0);
  CHECK(zero.hi == doctest::Approx(0.03).epsilon(1e-14));
  const RateEstimate full = wilson_interval(100, 100);
  CHECK(full.lo == doctest::Approx(0.97).epsilon(1e-14));
  CHECK(full.hi == 1.0);

  CHECK_THROWS_AS(wilson_interval(5, 0), DomainError);
  CHECK_THROWS_AS(wilson_interval(7, 5), DomainError);
}

TEST_CASE("determinism and worker independence") {
  const OverlapStats stats = gaussian_overlap_stats(2.0);
  const PointSpreadFunction psf = PointSpreadFunction::gaussian();

  const MonteCarloSummary a = estimate_error_conditional(
      kAt2, stats, nullptr, Scheme::BSpade, DecisionRule::Simplified, 5, 20000,
      42, 1);
  const MonteCarloSummary b = estimate_error_conditional(
      kAt2, stats, nullptr, Scheme::BSpade, DecisionRule::Simplified, 5, 20000,
      42, 1);
  const MonteCarloSummary c = estimate_error_conditional(
      kAt2, stats, nullptr, Scheme::BSpade, DecisionRule::Simplified, 5, 20000,
      42, 4);
  CHECK(same_summary(a, b));
  CHECK(same_summary(a, c));  // serial reference == parallel kernel

  const MonteCarloSummary d = estimate_error(
      kAt2, stats, &psf, Scheme::DirectImaging, DecisionRule::LikelihoodRatio,
      5000, 7, 1);
  const MonteCarloSummary e = estimate_error(
      kAt2, stats, &psf, Scheme::DirectImaging, DecisionRule::LikelihoodRatio,
      5000, 7, 3);
  CHECK(same_summary(d, e));
  CHECK(d.rng_id == PhiloxRng::kId);
  CHECK(d.seed == 7);
}

TEST_CASE("structural zero false alarms for click schemes") {
  const OverlapStats stats = gaussian_overlap_stats(2.0);
  for (Scheme scheme : {Scheme::BSpade, Scheme::Sliver}) {
    const MonteCarloSummary s = estimate_error(
        kAt2, stats, nullptr, scheme, DecisionRule::Simplified, 20000, 3, 0);
    CHECK(s.alpha.value == 0.0);
  }
}

TEST_CASE("simplified-rule empirical rates meet the closed forms") {
  const OverlapStats stats = gaussian_overlap_stats(2.0);

  // conditional: beta against chi^(2L) and lambda_+^L
  const MonteCarloSummary b = estimate_error_conditional(
      kAt2, stats, nullptr, Scheme::BSpade, DecisionRule::Simplified, 5, 100000,
      42, 0);
  const double chi_10 = std::pow(stats.chi, 10);
  CHECK(b.beta.lo <= chi_10);
  CHECK(chi_10 <= b.beta.hi);

  const MonteCarloSummary s = estimate_error_conditional(
      kAt2, stats, nullptr, Scheme::Sliver, DecisionRule::Simplified, 5, 100000,
      42, 0);
  const double lam_5 = std::pow(stats.lambda_plus, 5);
  CHECK(s.beta.lo <= lam_5);
  CHECK(lam_5 <= s.beta.hi);

  // unconditional: p_error against p2 (1 - eps + eps chi^2)^M
  const MonteCarloSummary u = estimate_error(
      kAt2, stats, nullptr, Scheme::BSpade, DecisionRule::Simplified, 100000,
      42, 0);
  const double analytic =
      bspade_error(stats, 0.5, 0.5, UnconditionalOnM{1000, 0.01}).p_error;
  CHECK(u.p_error_lo <= analytic);
  CHECK(analytic <= u.p_error_hi);

  // stratified averaging identity is exact
  CHECK(u.p_error == 0.5 * u.alpha.value + 0.5 * u.beta.value);
}

TEST_CASE("degenerate separations decide deterministically") {
  const OverlapStats at0 = gaussian_overlap_stats(0.0);
  const Scenario sc{0.0, 0.5, 0.5, 0.01, 200};
  const PointSpreadFunction psf = PointSpreadFunction::gaussian();

  // no antisymmetric clicks ever at d = 0
  const MonteCarloSummary s = estimate_error(
      sc, at0, nullptr, Scheme::Sliver, DecisionRule::Simplified, 5000, 11, 0);
  CHECK(s.alpha.value == 0.0);
  CHECK(s.beta.value == 1.0);

  // flat likelihood ratio resolves ties toward one source
  const MonteCarloSummary d = estimate_error_conditional(
      sc, at0, &psf, Scheme::DirectImaging, DecisionRule::LikelihoodRatio, 5,
      2000, 11, 0);
  CHECK(d.alpha.value == 0.0);
  CHECK(d.beta.value == 1.0);

  // no photons, no clicks: always the one-source call
  const MonteCarloSummary l0 = estimate_error_conditional(
      kAt2, gaussian_overlap_stats(2.0), nullptr, Scheme::Sliver,
      DecisionRule::Simplified, 0, 1000, 5, 0);
  CHECK(l0.alpha.value == 0.0);
  CHECK(l0.beta.value == 1.0);
}

TEST_CASE("likelihood-ratio rule coincides with simplified at equal priors") {
  const OverlapStats stats = gaussian_overlap_stats(2.0);
  for (Scheme scheme : {Scheme::BSpade, Scheme::Sliver}) {
    const MonteCarloSummary simp = estimate_error_conditional(
        kAt2, stats, nullptr, scheme, DecisionRule::Simplified, 5, 20000, 9, 0);
    const MonteCarloSummary lrt = estimate_error_conditional(
        kAt2, stats, nullptr, scheme, DecisionRule::LikelihoodRatio, 5, 20000,
        9, 0);
    CHECK(same_summary(simp, lrt));
  }
}

TEST_CASE("single-trial outcomes") {
  const OverlapStats stats = gaussian_overlap_stats(2.0);
  const PointSpreadFunction psf = PointSpreadFunction::gaussian();

  PhiloxRng rng(99, 0);
  const TrialOutcome t = simulate_trial(kAt2, stats, nullptr, Scheme::BSpade,
                                        DecisionRule::Simplified,
                                        Hypothesis::H1, rng);
  CHECK(t.truth == Hypothesis::H1);
  CHECK(t.scheme_clicks == 0);  // complement modes stay dark under H1
  CHECK(t.decision == Hypothesis::H1);
  CHECK(t.scheme_clicks <= t.detected_photons);

  PhiloxRng rng2(99, 1);
  const TrialOutcome c = simulate_trial_conditional(
      kAt2, stats, &psf, Scheme::DirectImaging, DecisionRule::LikelihoodRatio,
      Hypothesis::H2, 5, rng2);
  CHECK(c.detected_photons == 5);
  CHECK(c.positions.size() == 5);

  // direct imaging under H1: arrival moments match the unit-width density
  PhiloxRng rng3(123, 2);
  const TrialOutcome m = simulate_trial_conditional(
      kAt2, stats, &psf, Scheme::DirectImaging, DecisionRule::LikelihoodRatio,
      Hypothesis::H1, 20000, rng3);
  double sx = 0.0, sxx = 0.0;
  for (const auto& p : m.positions) {
    sx += p[0];
    sxx += p[0] * p[0];
  }
  const double mean = sx / 20000.0, var = sxx / 20000.0 - mean * mean;
  CHECK(std::fabs(mean) < 0.03);
  CHECK(std::fabs(var - 1.0) < 0.04);

  CHECK_THROWS_AS(
      estimate_error(kAt2, stats, &psf, Scheme::DirectImaging,
                     DecisionRule::Simplified, 100, 1, 0),
      DomainError);
  CHECK_THROWS_AS(
      estimate_error(kAt2, stats, nullptr, Scheme::DirectImaging,
                     DecisionRule::LikelihoodRatio, 100, 1, 0),
      DomainError);
  CHECK_THROWS_AS(
      estimate_error(kAt2, stats, nullptr, Scheme::QuantumLimit,
                     DecisionRule::Simplified, 100, 1, 0),
      DomainError);
}

TEST_CASE("direct imaging error sits inside the analytic bracket") {
  const OverlapStats stats = gaussian_overlap_stats(2.0);
  const PointSpreadFunction psf = PointSpreadFunction::gaussian();
  const MonteCarloSummary s = estimate_error_conditional(
      kAt2, stats, &psf, Scheme::DirectImaging, DecisionRule::LikelihoodRatio,
      5, 100000, 42, 0);
  const DirectImagingBounds b = direct_imaging_bounds(
      bhattacharyya(psf, 2.0), direct_imaging_exponent(psf, 2.0).exponent, 5);
  const double se = 0.5 * std::sqrt(s.alpha.value * (1 - s.alpha.value) / 1e5 +
                                    s.beta.value * (1 - s.beta.value) / 1e5);
  CHECK(s.p_error >= b.lower - 3 * se);
  CHECK(s.p_error <= b.upper + 3 * se);

  // and never beats the quantum limit
  const double quantum = min_error_conditional(stats, 0.5, 0.5, 5).p_error;
  CHECK(s.p_error >= quantum - 3 * se);
}

TEST_CASE("empirical miss rate sits within four standard errors, seed sweep") {
  const OverlapStats stats = gaussian_overlap_stats(2.0);
  const double analytic = std::pow(stats.chi, 10);
  const double se = std::sqrt(analytic * (1.0 - analytic) / 1e5);
  int hits = 0;
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const MonteCarloSummary s = estimate_error_conditional(
        kAt2, stats, nullptr, Scheme::BSpade, DecisionRule::Simplified, 5,
        100000, seed, 0);
    if (std::fabs(s.beta.value - analytic) < 4.0 * se) ++hits;
  }
  CHECK(hits >= 19);
}

TEST_CASE("likelihood-ratio direct imaging stays inside the bracket grid") {
  const PointSpreadFunction psf = PointSpreadFunction::gaussian();
  for (double d : {0.5, 2.0}) {
    const OverlapStats stats = gaussian_overlap_stats(d);
    const Scenario sc{d, 0.5, 0.5, 0.01, 1};
    const double coeff = bhattacharyya(psf, d);
    const double xi = direct_imaging_exponent(psf, d).exponent;
    for (long L : {1L, 5L, 10L, 20L}) {
      const DirectImagingBounds b = direct_imaging_bounds(coeff, xi, L);
      const MonteCarloSummary s = estimate_error_conditional(
          sc, stats, &psf, Scheme::DirectImaging,
          DecisionRule::LikelihoodRatio, L, 20000, 33, 0);
      const double n = static_cast<double>(s.trials);
      const double se =
          0.5 * std::sqrt(s.alpha.value * (1 - s.alpha.value) / n +
                          s.beta.value * (1 - s.beta.value) / n);
      CHECK(s.p_error >= b.lower - 3 * se);
      CHECK(s.p_error <= b.upper + 3 * se);
      // and the measurement-optimized error is never beaten
      const double quantum = min_error_conditional(stats, 0.5, 0.5, L).p_error;
      CHECK(s.p_error >= quantum - 3 * se);
    }
  }
}

TEST_CASE("error reports stay inside their bounds") {
  for (double d : {0.0, 0.5, 2.0, 5.0})
    for (double p1 : {0.1, 0.5, 0.9})
      for (long L : {0L, 1L, 7L}) {
        const OverlapStats stats = gaussian_overlap_stats(d);
        for (const ErrorReport& r :
             {bspade_error(stats, p1, 1 - p1, ConditionalOnL{L}),
              sliver_error(stats, p1, 1 - p1, ConditionalOnL{L}),
              min_error_conditional(stats, p1, 1 - p1, L)}) {
          CHECK(r.p_error >= 0.0);
          CHECK(r.p_error <= std::max(p1, 1 - p1) + 1e-15);
          if (r.alpha && r.beta)
            CHECK(r.p_error == p1 * *r.alpha + (1 - p1) * *r.beta);
        }
      }
}

TEST_CASE("sampled psf sampler approximates the gaussian path") {
  // a sampled copy of the gaussian PSF should give a close empirical error
  GridSpec g;
  g.nx = g.ny = 321;
  g.dx = g.dy = 0.05;
  g.x0 = g.y0 = -8.0;
  std::vector<double> v;
  v.reserve(321 * 321);
  const double norm = std::pow(2.0 * M_PI, -0.25);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const double x = g.x0 + ix * g.dx, y = g.y0 + iy * g.dy;
      v.push_back(norm * std::exp(-0.25 * x * x) * norm *
                  std::exp(-0.25 * y * y));
    }
  const PointSpreadFunction sampled =
      PointSpreadFunction::from_grid(g, std::move(v));
  const PointSpreadFunction gaussian = PointSpreadFunction::gaussian();
  const OverlapStats stats = gaussian_overlap_stats(2.0);

  const MonteCarloSummary a = estimate_error_conditional(
      kAt2, stats, &sampled, Scheme::DirectImaging,
      DecisionRule::LikelihoodRatio, 5, 20000, 21, 0);
  const MonteCarloSummary b = estimate_error_conditional(
      kAt2, stats, &gaussian, Scheme::DirectImaging,
      DecisionRule::LikelihoodRatio, 5, 20000, 21, 0);
  CHECK(std::fabs(a.p_error - b.p_error) < 0.02);
}
