#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>

namespace hbergman {

/// Largest ambient dimension supported by the fixed-capacity point types.
inline constexpr int kMaxDim = 8;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A point of R^n, 2 <= n <= kMaxDim, stored inline (no allocation).
class CartesianPoint {
 public:
  CartesianPoint() = default;
  explicit CartesianPoint(int dim);
  CartesianPoint(std::initializer_list<double> coords);
  explicit CartesianPoint(std::span<const double> coords);

  [[nodiscard]] int dim() const { return dim_; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] std::span<const double> coords() const {
    return {c_.data(), static_cast<std::size_t>(dim_)};
  }

  [[nodiscard]] double norm_sq() const;
  [[nodiscard]] double norm() const;
  [[nodiscard]] double dot(const CartesianPoint& o) const;

  CartesianPoint& operator+=(const CartesianPoint& o);
  CartesianPoint& operator-=(const CartesianPoint& o);
  CartesianPoint& operator*=(double s);
  friend CartesianPoint operator+(CartesianPoint a, const CartesianPoint& b) { return a += b; }
  friend CartesianPoint operator-(CartesianPoint a, const CartesianPoint& b) { return a -= b; }
  friend CartesianPoint operator*(double s, CartesianPoint a) { return a *= s; }
  friend CartesianPoint operator*(CartesianPoint a, double s) { return a *= s; }
  bool operator==(const CartesianPoint& o) const;

 private:
  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

void require_same_dim(const CartesianPoint& a, const CartesianPoint& b);

/// w(x) = 1 - |x|^2.
double weight(const CartesianPoint& x);

/// [x,a] = (1 - 2 x.a + |x|^2 |a|^2)^{1/2}.
double bracket(const CartesianPoint& x, const CartesianPoint& a);

/// Involutive Mobius automorphism of the ball sending a to 0.
/// Requires |a| < 1 and |x| < 1.
CartesianPoint mobius(const CartesianPoint& a, const CartesianPoint& x);

/// |phi_a'(x)| = w(a) / [x,a]^2.
double mobius_derivative_norm(const CartesianPoint& a, const CartesianPoint& x);

/// Poincare distance log((1+|phi_a(b)|)/(1-|phi_a(b)|)).
double hyperbolic_distance(const CartesianPoint& a, const CartesianPoint& b);

}  // namespace hbergman
