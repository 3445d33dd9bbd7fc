#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>

#include "hbergman/geometry.hpp"

namespace hbergman {

/// A point of Q_n = [0,1) x [0,pi]^{n-2} x [0,2pi].
///
/// Coordinate index 0 is the radius, index j (1 <= j <= n-1) is the angle
/// theta_{j+1}; so the last coordinate is the azimuth theta_n.
class SphericalPoint {
 public:
  SphericalPoint() = default;
  explicit SphericalPoint(int dim);
  SphericalPoint(int dim, std::initializer_list<double> coords);

  [[nodiscard]] int dim() const { return dim_; }
  double& operator[](int i) { return q_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return q_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] double r() const { return q_[0]; }

 private:
  std::array<double, kMaxDim> q_{};
  int dim_ = 0;
};

/// Throws DomainError unless every coordinate lies in its Q_n range
/// (the radius is allowed to reach 1, the closed ball).
void validate_spherical(const SphericalPoint& g);

/// The map sigma : Q_n -> B_n.
CartesianPoint to_cartesian(const SphericalPoint& g);

/// Unchecked variant of to_cartesian for hot loops (any real coordinates).
void to_cartesian_unchecked(int dim, const double* q, double* x);

/// A.e. inverse of sigma. At singular points (a vanishing sine) the later
/// angles are set to 0; the azimuth is returned in [0, 2pi).
SphericalPoint to_spherical(const CartesianPoint& x);

/// Unnormalized Jacobian r^{n-1} sin^{n-2}(theta_2) ... sin(theta_{n-1}).
double jacobian(const SphericalPoint& g);
double jacobian_unchecked(int dim, const double* q);

/// Euclidean volume of the unit ball of R^n.
double unit_ball_volume(int n);

}  // namespace hbergman
