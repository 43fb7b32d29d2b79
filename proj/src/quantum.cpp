#include "onevstwo/quantum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace onevstwo {

namespace {

// x^n for x in [0,1], |x| handled for oscillating overlaps; log-domain to keep
// L up to 10^4 stable.
double pow_log_domain(double x, double n) {
  if (n == 0.0) return 1.0;
  if (x == 0.0) return 0.0;
  return std::exp(n * std::log(x));
}

double conditional_min_error(const OverlapStats& s, double p1, double p2,
                             long L) {
  const double lam_l = pow_log_domain(s.lambda_plus, static_cast<double>(L));
  const double chi_2l =
      pow_log_domain(std::fabs(s.chi), 2.0 * static_cast<double>(L));
  const double a = p1 + p2 * lam_l;
  if (a <= 0.0) return 0.0;  // p1 = 0 and lambda_+^L underflowed
  double z = 4.0 * p1 * p2 * chi_2l / (a * a);
  z = std::clamp(z, 0.0, 1.0);
  return 0.5 * a * z / (1.0 + std::sqrt(1.0 - z));
}

double log_binomial_pmf(long M, long L, double eps) {
  return std::lgamma(M + 1.0) - std::lgamma(L + 1.0) - std::lgamma(M - L + 1.0) +
         L * std::log(eps) + (M - L) * std::log1p(-eps);
}

}  // namespace

ErrorReport min_error_conditional(const OverlapStats& stats, double p1,
                                  double p2, long L) {
  validate_priors(p1, p2);
  if (L < 0) throw DomainError("min_error_conditional: L must be nonnegative");
  ErrorReport r;
  r.scheme = Scheme::QuantumLimit;
  r.conditioning = ConditionalOnL{L};
  r.p_error = conditional_min_error(stats, p1, p2, L);
  return r;
}

ErrorReport min_error_unconditional(const OverlapStats& stats,
                                    const Scenario& scenario) {
  scenario.validate();
  const double p1 = scenario.p1, p2 = scenario.p2;
  const long M = scenario.modes;
  const double eps = scenario.epsilon;

  // Walk outward from the mode of Binomial(M, eps) until the remaining tail
  // weight drops below 1e-15; each term's weight is exponentiated once.
  const long mode = std::clamp(
      static_cast<long>(std::floor((M + 1) * eps)), 0L, M);
  double sum = 0.0, weight_seen = 0.0;
  long lo = mode, hi = mode;
  bool lo_open = true, hi_open = true;
  while ((lo_open || hi_open) && weight_seen < 1.0 - 1e-15) {
    if (hi_open) {
      const double w = std::exp(log_binomial_pmf(M, hi, eps));
      sum += w * conditional_min_error(stats, p1, p2, hi);
      weight_seen += w;
      if (hi == M) hi_open = false; else ++hi;
    }
    if (lo_open && weight_seen < 1.0 - 1e-15) {
      if (lo == mode) {  // mode already accumulated via the hi walk
        lo_open = lo > 0;
        if (lo_open) --lo;
        continue;
      }
      const double w = std::exp(log_binomial_pmf(M, lo, eps));
      sum += w * conditional_min_error(stats, p1, p2, lo);
      weight_seen += w;
      if (lo == 0) lo_open = false; else --lo;
    }
  }

  ErrorReport r;
  r.scheme = Scheme::QuantumLimit;
  r.conditioning = UnconditionalOnM{M, eps};
  r.p_error = sum;
  r.model_warning = scenario.high_epsilon();
  return r;
}

ApproxConditionalError min_error_approx(const OverlapStats& stats, double p1,
                                        double p2, long L) {
  validate_priors(p1, p2);
  if (L < 1) throw DomainError("min_error_approx: L must be positive");
  const double abs_chi = std::fabs(stats.chi);
  if (abs_chi == 1.0 && p1 != p2)
    throw DomainError(
        "min_error_approx: precondition unsatisfiable at |chi| = 1 with "
        "unequal priors");
  const double chi_2l = pow_log_domain(abs_chi, 2.0 * static_cast<double>(L));
  const double lam_l = pow_log_domain(stats.lambda_plus, static_cast<double>(L));
  ApproxConditionalError a;
  a.value = p1 * p2 * chi_2l / (p1 + p2 * lam_l);
  a.upper_bound = p2 * chi_2l;
  a.precondition_ok = abs_chi < 1.0 && (p2 == 0.0 || chi_2l <= 0.1 * p1 / p2);
  return a;
}

ChernoffResult quantum_chernoff(const OverlapStats& stats) {
  if (stats.chi < 0.0)
    throw DomainError("quantum_chernoff: negative overlap chi");
  ChernoffResult r;
  r.scheme = Scheme::QuantumLimit;
  r.s_star = 0.5;
  r.exponent = stats.chi == 0.0 ? std::numeric_limits<double>::infinity()
                                : std::fabs(2.0 * std::log(stats.chi));
  return r;
}

double min_error_conditional_gram(const OverlapStats& stats, double p1,
                                  double p2, int L) {
  validate_priors(p1, p2);
  if (L < 1 || L > 8)
    throw DomainError("min_error_conditional_gram: L must be in [1, 8]");

  const double lam = stats.lambda_plus;
  const double lam_l = std::pow(lam, L);
  // <phi_+|psi_1> = chi / sqrt(lambda_+); L-fold product gives the Gram
  // off-diagonal between the two unit vectors spanning the subspace.
  const double g = std::clamp(std::pow(stats.chi / std::sqrt(lam), L), -1.0, 1.0);
  const double a = p2 * lam_l;  // weight on the symmetric L-fold eigenmode
  const double b = p1;          // weight on the one-source L-fold state

  double trace_norm;
  const double ortho = 1.0 - g * g;
  if (ortho < 1e-14) {
    trace_norm = std::fabs(a - b);  // vectors coincide; rank-1 difference
  } else {
    Eigen::Matrix2d gamma;
    gamma << a - b * g * g, -b * g * std::sqrt(ortho),
        -b * g * std::sqrt(ortho), -b * ortho;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(gamma);
    trace_norm = std::fabs(solver.eigenvalues()(0)) +
                 std::fabs(solver.eigenvalues()(1));
  }
  return 0.5 * (1.0 - trace_norm - p2 * (1.0 - lam_l));
}

}  // namespace onevstwo
