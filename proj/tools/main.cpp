#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "onevstwo/csv.hpp"
#include "onevstwo/psf.hpp"
#include "onevstwo/sweeps.hpp"

namespace {

using namespace onevstwo;

PointSpreadFunction resolve_psf(const std::string& spec) {
  if (spec == "gaussian") return PointSpreadFunction::gaussian();
  const std::string prefix = "file:";
  if (spec.rfind(prefix, 0) == 0)
    return PointSpreadFunction::load_csv(spec.substr(prefix.size()));
  throw DomainError("--psf must be 'gaussian' or 'file:<path>'");
}

void emit(const CsvTable& table, const std::string& out_path) {
  if (out_path.empty())
    write_csv(table, std::cout);
  else
    write_csv_file(table, out_path);
}

Scheme parse_scheme(const std::string& name) {
  if (name == "bspade") return Scheme::BSpade;
  if (name == "sliver") return Scheme::Sliver;
  if (name == "direct") return Scheme::DirectImaging;
  throw DomainError("--scheme must be bspade, sliver or direct");
}

struct CommonArgs {
  std::string psf = "gaussian";
  std::string out;
  double p1 = 0.5;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--psf", args.psf,
                  "PSF: 'gaussian' or 'file:<grid.csv>' (with sidecar "
                  "<grid.csv>.meta)");
  cmd->add_option("--out", args.out, "Output CSV path (default: stdout)");
  cmd->add_option("--p1", args.p1, "Prior probability of the one-source "
                  "hypothesis (p2 = 1 - p1)");
  cmd->set_config("--config");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Error probabilities and error exponents for deciding whether an "
      "optical field comes from one point source or two"};
  app.require_subcommand(1);

  // exponents
  CommonArgs ex_common;
  double ex_dmin = 0.0, ex_dmax = 6.0, ex_dstep = 0.1;
  CLI::App* ex = app.add_subcommand(
      "exponents", "Asymptotic error exponents versus separation");
  ex->add_option("--d-min", ex_dmin, "Smallest separation");
  ex->add_option("--d-max", ex_dmax, "Largest separation");
  ex->add_option("--d-step", ex_dstep, "Separation step");
  add_common(ex, ex_common);

  // conditional
  CommonArgs co_common;
  long co_L = 5;
  double co_d2min = 0.0, co_d2max = 16.0, co_d2step = 0.5;
  CLI::App* co = app.add_subcommand(
      "conditional",
      "Error probabilities conditioned on L photons, versus d^2");
  co->add_option("--L", co_L, "Detected photon count");
  co->add_option("--d2-min", co_d2min, "Smallest squared separation");
  co->add_option("--d2-max", co_d2max, "Largest squared separation");
  co->add_option("--d2-step", co_d2step, "Squared-separation step");
  add_common(co, co_common);

  // photons
  CommonArgs ph_common;
  double ph_d = 2.0;
  long ph_lmin = 0, ph_lmax = 30;
  CLI::App* ph = app.add_subcommand(
      "photons", "Conditional error probabilities versus photon count");
  ph->add_option("--d", ph_d, "Separation");
  ph->add_option("--L-min", ph_lmin, "Smallest photon count");
  ph->add_option("--L-max", ph_lmax, "Largest photon count");
  add_common(ph, ph_common);

  // unconditional
  CommonArgs un_common;
  double un_eps = 0.01, un_dmin = 0.0, un_dmax = 4.0, un_dstep = 0.1;
  std::vector<long> un_modes{100, 500, 1000};
  CLI::App* un = app.add_subcommand(
      "unconditional",
      "Unconditional error probabilities over M temporal modes, versus d");
  un->add_option("--epsilon", un_eps, "Mean photon number per temporal mode");
  un->add_option("--M", un_modes, "Temporal-mode count (repeatable)");
  un->add_option("--d-min", un_dmin, "Smallest separation");
  un->add_option("--d-max", un_dmax, "Largest separation");
  un->add_option("--d-step", un_dstep, "Separation step");
  add_common(un, un_common);

  // simulate
  CommonArgs si_common;
  std::vector<std::string> si_schemes{"bspade"};
  std::string si_rule = "simplified";
  double si_d = 2.0, si_eps = 0.01;
  long si_L = -1, si_modes = 1000, si_trials = 100000;
  std::uint64_t si_seed = 42;
  int si_threads = 0;
  CLI::App* si = app.add_subcommand(
      "simulate", "Seeded Monte Carlo of the photon record, against the "
                  "analytic values");
  si->add_option("--scheme", si_schemes,
                 "Scheme: bspade, sliver or direct (repeatable)");
  si->add_option("--rule", si_rule, "Decision rule: simplified or lrt");
  si->add_option("--d", si_d, "Separation");
  si->add_option("--L", si_L,
                 "Condition on exactly L photons (omit for the temporal-mode "
                 "layout)");
  si->add_option("--M", si_modes, "Temporal-mode count");
  si->add_option("--epsilon", si_eps, "Mean photon number per temporal mode");
  si->add_option("--trials", si_trials, "Trials per hypothesis");
  si->add_option("--seed", si_seed, "RNG seed");
  si->add_option("--threads", si_threads,
                 "Worker threads (0 = default; never changes results)");
  add_common(si, si_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit cleanly
  }

  try {
    if (*ex) {
      emit(exponents_table(resolve_psf(ex_common.psf), ex_dmin, ex_dmax,
                           ex_dstep),
           ex_common.out);
    } else if (*co) {
      emit(conditional_table(resolve_psf(co_common.psf), co_L, co_common.p1,
                             co_d2min, co_d2max, co_d2step),
           co_common.out);
    } else if (*ph) {
      emit(photons_table(resolve_psf(ph_common.psf), ph_d, ph_common.p1,
                         ph_lmin, ph_lmax),
           ph_common.out);
    } else if (*un) {
      if (un_eps > 0.1)
        std::cerr << "warning: epsilon " << un_eps
                  << " is outside the weak-source regime the per-mode model "
                     "assumes\n";
      emit(unconditional_table(resolve_psf(un_common.psf), un_eps, un_modes,
                               un_dmin, un_dmax, un_dstep, un_common.p1),
           un_common.out);
    } else if (*si) {
      SimulateConfig cfg;
      for (const auto& name : si_schemes)
        cfg.schemes.push_back(parse_scheme(name));
      if (si_rule == "simplified")
        cfg.rule = DecisionRule::Simplified;
      else if (si_rule == "lrt")
        cfg.rule = DecisionRule::LikelihoodRatio;
      else
        throw DomainError("--rule must be simplified or lrt");
      cfg.conditional = si_L >= 0;
      cfg.photons = si_L;
      cfg.scenario = Scenario{si_d, si_common.p1, 1.0 - si_common.p1, si_eps,
                              si_modes};
      cfg.trials = si_trials;
      cfg.seed = si_seed;
      cfg.threads = si_threads;
      if (cfg.scenario.high_epsilon())
        std::cerr << "warning: epsilon " << si_eps
                  << " is outside the weak-source regime the per-mode model "
                     "assumes\n";
      emit(simulate_table(resolve_psf(si_common.psf), cfg), si_common.out);
    }
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const PsfError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
