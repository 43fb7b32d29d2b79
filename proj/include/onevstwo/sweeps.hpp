#pragma once

#include <cstdint>
#include <vector>

#include "onevstwo/csv.hpp"
#include "onevstwo/montecarlo.hpp"
#include "onevstwo/psf.hpp"
#include "onevstwo/types.hpp"

namespace onevstwo {

// Inclusive arithmetic grid lo, lo+step, ..., hi (hi included up to rounding
// slack). Throws DomainError on an empty or backwards range.
std::vector<double> sweep_grid(double lo, double hi, double step);

// Columns: d, xi_quantum, xi_bspade, xi_sliver, xi_direct.
CsvTable exponents_table(const PointSpreadFunction& psf, double d_min,
                         double d_max, double d_step);

// Columns: d_squared, p_min, p_bspade, p_sliver, p_direct_lower,
// p_direct_upper. Direct-imaging bounds require equal priors and print as nan
// otherwise.
CsvTable conditional_table(const PointSpreadFunction& psf, long photons,
                           double p1, double d2_min, double d2_max,
                           double d2_step);

// Same value columns as conditional_table, indexed by L at fixed d.
CsvTable photons_table(const PointSpreadFunction& psf, double d, double p1,
                       long l_min, long l_max);

// Columns: d, M, p_min_uncond, p_bspade_uncond, p_sliver_uncond; one block of
// d rows per mode count.
CsvTable unconditional_table(const PointSpreadFunction& psf, double epsilon,
                             const std::vector<long>& mode_counts,
                             double d_min, double d_max, double d_step,
                             double p1);

struct SimulateConfig {
  std::vector<Scheme> schemes;  // BSpade, Sliver, DirectImaging
  DecisionRule rule = DecisionRule::Simplified;
  bool conditional = true;  // condition on L photons vs (epsilon, M) modes
  long photons = 5;
  Scenario scenario;
  long trials = 100000;
  std::uint64_t seed = 42;
  int threads = 0;
};

// One row per scheme: the empirical rates with Wilson intervals next to the
// analytic value (or the direct-imaging bracket) and an in_ci verdict.
CsvTable simulate_table(const PointSpreadFunction& psf,
                        const SimulateConfig& config);

}  // namespace onevstwo
