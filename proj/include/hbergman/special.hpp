#pragma once

#include <vector>

namespace hbergman {

struct QuadratureRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `count` nodes on [-1, 1]. Rules are cached and
/// returned by reference; the cache is filled on first use per count.
const QuadratureRule1D& gauss_legendre(int count);

/// Gauss-Jacobi rule on [-1, 1] for the weight (1-t)^alpha (1+t)^beta,
/// alpha, beta > -1 (Golub-Welsch).
QuadratureRule1D gauss_jacobi(int count, double alpha, double beta);

/// log Gamma(a) - log Gamma(b) for positive arguments.
double log_gamma_ratio(double a, double b);

/// Gamma(a) / Gamma(b) for positive arguments, computed through log-Gamma.
double gamma_ratio(double a, double b);

}  // namespace hbergman
