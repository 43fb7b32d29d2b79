#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "onevstwo/psf.hpp"
#include "onevstwo/rng.hpp"
#include "onevstwo/types.hpp"

namespace onevstwo {

enum class DecisionRule {
  Simplified,       // accept H2 iff any complement/antisymmetric click
  LikelihoodRatio,  // threshold the outcome likelihood product at p1/p2
};

struct TrialOutcome {
  long detected_photons = 0;  // modes that carried a photon
  long scheme_clicks = 0;     // complement-mode or antisymmetric-port clicks
  std::vector<std::array<double, 2>> positions;  // direct-imaging arrivals
  Hypothesis decision = Hypothesis::H1;
  Hypothesis truth = Hypothesis::H1;
};

// Rate with its 95% Wilson score interval.
struct RateEstimate {
  double value = 0.0;
  double lo = 0.0;
  double hi = 1.0;
};

struct MonteCarloSummary {
  long trials = 0;  // per hypothesis; truth is stratified exactly
  RateEstimate alpha;
  RateEstimate beta;
  double p_error = 0.0;
  double p_error_lo = 0.0;
  double p_error_hi = 1.0;
  std::uint64_t seed = 0;
  std::string rng_id;
};

// 95% Wilson score interval; zero and full counts fall back to the one-sided
// rule-of-three bound.
RateEstimate wilson_interval(std::uint64_t count, std::uint64_t n);

// One trial over scenario.modes temporal modes, each carrying a photon with
// probability epsilon (one photon at most per mode). psf may be null except
// for direct imaging.
TrialOutcome simulate_trial(const Scenario& scenario, const OverlapStats& stats,
                            const PointSpreadFunction* psf, Scheme scheme,
                            DecisionRule rule, Hypothesis truth, PhiloxRng& rng);

// One trial conditioned on exactly L detected photons; the temporal-mode
// Bernoulli layer is skipped.
TrialOutcome simulate_trial_conditional(const Scenario& scenario,
                                        const OverlapStats& stats,
                                        const PointSpreadFunction* psf,
                                        Scheme scheme, DecisionRule rule,
                                        Hypothesis truth, long photons,
                                        PhiloxRng& rng);

// Stratified estimate: `trials` independent trials under each hypothesis,
// averaged with the scenario priors. Fully reproducible from (seed, trials,
// parameters); `threads` selects the execution path (1 = serial reference,
// 0 = library default) and never changes the result.
MonteCarloSummary estimate_error(const Scenario& scenario,
                                 const OverlapStats& stats,
                                 const PointSpreadFunction* psf, Scheme scheme,
                                 DecisionRule rule, long trials,
                                 std::uint64_t seed, int threads = 0);

MonteCarloSummary estimate_error_conditional(const Scenario& scenario,
                                             const OverlapStats& stats,
                                             const PointSpreadFunction* psf,
                                             Scheme scheme, DecisionRule rule,
                                             long photons, long trials,
                                             std::uint64_t seed,
                                             int threads = 0);

}  // namespace onevstwo
