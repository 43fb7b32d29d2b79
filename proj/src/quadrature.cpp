#include "onevstwo/quadrature.hpp"

#include <Eigen/Dense>

#include <map>
#include <mutex>

namespace onevstwo {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the symmetric tridiagonal Jacobi
// matrix of the orthogonal-polynomial recurrence; the weight of node k is
// mu0 * v_k(0)^2 with v_k the normalized eigenvector.
GaussRule golub_welsch(const Eigen::VectorXd& offdiag, double mu0) {
  const int n = static_cast<int>(offdiag.size()) + 1;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, offdiag,
                                Eigen::ComputeEigenvectors);
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = solver.eigenvalues()(k);
    const double v0 = solver.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v0 * v0;
  }
  return rule;
}

GaussRule make_legendre(int n) {
  Eigen::VectorXd b(n - 1);
  for (int k = 1; k < n; ++k)
    b(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  return golub_welsch(b, 2.0);
}

GaussRule make_hermite(int n) {
  // Nodes from the Jacobi-matrix eigenvalues. Weights via the Christoffel
  // function 1/sum_k psi_k(x)^2 with the orthonormal recurrence: eigenvector
  // first components underflow to noise at the extreme nodes of large rules,
  // while the reciprocal sum keeps full relative accuracy.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd b(n - 1);
  for (int k = 1; k < n; ++k) b(k - 1) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, b, Eigen::EigenvaluesOnly);

  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = solver.eigenvalues()(i);
    double prev = 0.0;
    double cur = std::pow(M_PI, -0.25);
    double sum = cur * cur;
    for (int k = 0; k + 1 < n; ++k) {
      const double next = x * std::sqrt(2.0 / (k + 1)) * cur -
                          std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
      prev = cur;
      cur = next;
      sum += cur * cur;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / sum;
  }
  return rule;
}

const GaussRule& cached(std::map<int, GaussRule>& cache, std::mutex& mutex,
                        int order, GaussRule (*make)(int)) {
  if (order < 1) throw DomainError("gauss rule: order must be positive");
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make(order)).first;
  return it->second;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::map<int, GaussRule> cache;
  static std::mutex mutex;
  return cached(cache, mutex, order, make_legendre);
}

const GaussRule& gauss_hermite(int order) {
  static std::map<int, GaussRule> cache;
  static std::mutex mutex;
  return cached(cache, mutex, order, make_hermite);
}

}  // namespace onevstwo
