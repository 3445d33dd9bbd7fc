#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "hbergman/quadrature.hpp"
#include "hbergman/symbols.hpp"

namespace hbergman {

/// Settings for kernel series and ball integrals.
///
/// Integrals run over the dyadic boxes of generations 0..max_gen (tensor
/// rule `grid`) plus the remaining shell 1 - 2^{-max_gen-1} <= |y| < 1,
/// which gets a Gauss-Jacobi radial rule in 1 - |y| and a fixed angular rule.
struct KernelConfig {
  double lambda = 0.0;
  /// Starting truncation degree; raised in steps of 10 until the tail bound
  /// drops below tail_tol.
  int truncation_degree = 60;
  double tail_tol = 1e-12;
  // Angular resolution matters more than depth for smooth integrands:
  // this gives about 1e-8 for degree 4 harmonics at |x| <= 0.6 in n = 3.
  int max_gen = 2;
  QuadratureGrid grid{{12, 32}, 1, 0, 4, 2};
  int tail_radial_nodes = 16;
  int tail_angular_nodes = 40;
  bool include_tail_shell = true;
  /// Gauss nodes per radial panel between oscillation breaks.
  int oscillation_nodes = 6;

  /// Kernel evaluation is refused for |x||y| above this.
  static constexpr double kMaxProduct = 0.98;
  static constexpr int kMaxDegree = 20000;

  void validate() const;
};

/// Dimension of the degree-k spherical harmonics in n variables.
double harmonic_dimension(int n, int k);

/// Gamma(k+n/2+lambda+1)/Gamma(k+n/2) * Gamma(n/2)/Gamma(n/2+lambda+1).
double kernel_coefficient(int n, double lambda, int k);

/// Extended zonal harmonic Z_k(x, y) = (|x||y|)^k dim_k G_k(<x', y'>) with
/// G_k(1) = 1 (Chebyshev for n = 2, Gegenbauer of index n/2-1 otherwise).
double zonal(int k, const CartesianPoint& x, const CartesianPoint& y);

struct KernelValue {
  double value = 0.0;
  int degree = 0;
  double tail_bound = 0.0;
};

/// Smallest admissible degree (>= cfg.truncation_degree, step 10) whose tail
/// bound sum_{k>K} coeff(k) dim_k t^k is below cfg.tail_tol, with that bound.
/// Throws DomainError for t > kMaxProduct and NumericalError if kMaxDegree
/// does not suffice.
std::pair<int, double> kernel_degree(int n, double t, const KernelConfig& cfg);

KernelValue reproducing_kernel_ex(const CartesianPoint& x, const CartesianPoint& y, const KernelConfig& cfg);
double reproducing_kernel(const CartesianPoint& x, const CartesianPoint& y, const KernelConfig& cfg);

/// Streams the nodes of the ball rule: dyadic boxes then the tail shell
/// (generation -1). Weights include the dV_lambda density.
///
/// With a symbol, boxes are clipped radially at its support radius, and
/// symbols with radial oscillation structure get radial panels between
/// consecutive breaks (oscillation_nodes Gauss nodes each). Such symbols
/// skip the tail shell, which cannot resolve them; the result is then the
/// plain partial sum through max_gen.
void for_each_ball_node(int n, const KernelConfig& cfg, const Symbol* psi,
                        const std::function<void(const CartesianPoint& y, double w, int generation)>& visit);

/// Whether for_each_ball_node includes the tail shell for this symbol.
bool tail_shell_used(const KernelConfig& cfg, const Symbol* psi);

/// Materialized, cached rule without a symbol.
struct BallRule {
  int n = 0;
  std::vector<CartesianPoint> nodes;
  std::vector<double> weights;
  std::vector<int> generation;

  [[nodiscard]] std::size_t size() const { return weights.size(); }
  static const BallRule& get(int n, const KernelConfig& cfg);
};

struct ProjectionResult {
  Complex value{};
  /// Sum per generation 0..max_gen; the tail shell separately.
  std::vector<Complex> per_generation;
  Complex tail_shell{};
  bool tail_shell_included = false;
  double kernel_tail = 0.0;
  int generations_used = 0;
  /// False when the last generation sums fail to shrink.
  bool decaying = true;
};

/// P_lambda f(x) = int f(y) R_lambda(x, y) dV_lambda(y).
ProjectionResult project_ex(const Integrand& f, const CartesianPoint& x, const KernelConfig& cfg);
Complex project(const Integrand& f, const CartesianPoint& x, const KernelConfig& cfg);

/// int |f(y)| |R_lambda(x, y)| dV_lambda(y).
double maximal_project(const Integrand& f, const CartesianPoint& x, const KernelConfig& cfg);

/// Box series of T_psi f(x) = sum_j P_lambda(chi_{B_j} psi f)(x). Truncated
/// symbols clip boxes at their support radius.
ProjectionResult toeplitz_apply(const Symbol& psi, const Integrand& f, const CartesianPoint& x,
                                const KernelConfig& cfg);
ProjectionResult toeplitz_truncated(const Symbol& psi, double rho, const Integrand& f, const CartesianPoint& x,
                                    const KernelConfig& cfg);

/// A real polynomial in n variables.
struct Polynomial {
  struct Term {
    double coef = 0.0;
    std::array<int, kMaxDim> exps{};
  };
  int dim = 0;
  std::vector<Term> terms;

  static Polynomial constant(int dim, double c);
  static Polynomial variable(int dim, int i);
  [[nodiscard]] double operator()(const CartesianPoint& x) const;
  [[nodiscard]] Polynomial laplacian() const;
  [[nodiscard]] Polynomial derivative(int i) const;
  /// Merges equal monomials and drops zeros.
  [[nodiscard]] Polynomial simplified() const;
  [[nodiscard]] int degree() const;
};

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator-(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(double c, const Polynomial& a);

struct HarmonicBasisElement {
  int degree = 0;
  int index = 0;
  std::string label;
  Polynomial poly;

  [[nodiscard]] double operator()(const CartesianPoint& x) const { return poly(x); }
  [[nodiscard]] Integrand as_integrand() const;
};

/// Real solid harmonics of degree 0..4 for n = 2 (9 elements) and n = 3
/// (25 elements), ordered by degree.
const std::vector<HarmonicBasisElement>& harmonic_basis(int n);

/// <T_psi e_i, e_j>_lambda = int psi e_i e_j dV_lambda over the ball rule.
Complex matrix_element(const Symbol& psi, const HarmonicBasisElement& ei, const HarmonicBasisElement& ej,
                       const KernelConfig& cfg);

/// (1 - z conj(w))^{-(2+lambda)}, the reproducing kernel of the weighted
/// Bergman space of analytic functions on the disk for dV_lambda.
Complex disk_analytic_kernel(Complex z, Complex w, double lambda);

/// int g(w) K(z, w) dV_lambda(w) over the disk ball rule (n = 2).
Complex analytic_project(const Integrand& g, Complex z, const KernelConfig& cfg);

/// T^an_psi f(z) = P^an(psi f)(z), assembled over the same boxes as toeplitz_apply.
Complex toeplitz_analytic_apply(const Symbol& psi, const Integrand& f, Complex z, const KernelConfig& cfg);

/// Analytic part (plus constant term) of a function h harmonic on |w| <= radius,
/// via the Cauchy integral over |w| = radius with `points` trapezoid nodes.
Complex cauchy_analytic_part(const std::function<Complex(Complex)>& h, Complex z, double radius, int points = 64);

CartesianPoint to_point(Complex z);
Complex to_complex(const CartesianPoint& x);

}  // namespace hbergman
