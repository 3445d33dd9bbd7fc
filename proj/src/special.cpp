#include "hbergman/special.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace hbergman {

namespace {

QuadratureRule1D build_gauss_legendre(int count) {
  QuadratureRule1D rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_count.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= count; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = count * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[count - 1 - i] = x;
    rule.weights[count - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const QuadratureRule1D& gauss_legendre(int count) {
  if (count < 1) throw std::invalid_argument("gauss_legendre: count must be >= 1");
  static std::mutex mu;
  static std::map<int, QuadratureRule1D> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(count);
  if (it == cache.end()) {
    if (count == 1) {
      it = cache.emplace(1, QuadratureRule1D{{0.0}, {2.0}}).first;
    } else {
      it = cache.emplace(count, build_gauss_legendre(count)).first;
    }
  }
  return it->second;
}

QuadratureRule1D gauss_jacobi(int count, double alpha, double beta) {
  if (count < 1) throw std::invalid_argument("gauss_jacobi: count must be >= 1");
  if (!(alpha > -1.0 && beta > -1.0)) throw std::invalid_argument("gauss_jacobi: alpha, beta > -1");
  // Jacobi matrix of the monic recurrence.
  Eigen::MatrixXd jm = Eigen::MatrixXd::Zero(count, count);
  const double ab = alpha + beta;
  for (int k = 0; k < count; ++k) {
    const double denom = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
    const double a = (k == 0) ? (beta - alpha) / (ab + 2.0)
                              : (beta * beta - alpha * alpha) / denom;
    jm(k, k) = a;
    if (k + 1 < count) {
      const double kk = k + 1.0;
      double b2 = 0.0;
      if (k == 0) {
        // (kk + ab) / (2kk + ab - 1) cancels to 1 at kk = 1.
        b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
      } else {
        const double num = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab);
        const double d =
            (2.0 * kk + ab) * (2.0 * kk + ab) * (2.0 * kk + ab + 1.0) * (2.0 * kk + ab - 1.0);
        b2 = num / d;
      }
      const double b = std::sqrt(b2);
      jm(k, k + 1) = b;
      jm(k + 1, k) = b;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jm);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                              std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
  QuadratureRule1D rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  for (int i = 0; i < count; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

double log_gamma_ratio(double a, double b) { return std::lgamma(a) - std::lgamma(b); }

double gamma_ratio(double a, double b) { return std::exp(log_gamma_ratio(a, b)); }

}  // namespace hbergman
