#include "hbergman/spherical_map.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace hbergman {

SphericalPoint::SphericalPoint(int dim) : dim_(dim) {
  if (dim < 2 || dim > kMaxDim) {
    throw DimensionError("spherical coordinates need 2 <= n <= " + std::to_string(kMaxDim));
  }
}

SphericalPoint::SphericalPoint(int dim, std::initializer_list<double> coords)
    : SphericalPoint(dim) {
  if (static_cast<int>(coords.size()) != dim) throw DimensionError("coordinate count != dim");
  std::size_t i = 0;
  for (double v : coords) q_[i++] = v;
}

void validate_spherical(const SphericalPoint& g) {
  constexpr double pi = std::numbers::pi;
  constexpr double slack = 1e-12;
  const int n = g.dim();
  if (!(g[0] >= 0.0 && g[0] <= 1.0)) throw DomainError("radius outside [0,1]");
  for (int j = 1; j < n - 1; ++j) {
    if (!(g[j] >= -slack && g[j] <= pi + slack)) {
      throw DomainError("polar angle theta_" + std::to_string(j + 1) + " outside [0,pi]");
    }
  }
  if (!(g[n - 1] >= -slack && g[n - 1] <= 2.0 * pi + slack)) {
    throw DomainError("azimuth outside [0,2pi]");
  }
}

void to_cartesian_unchecked(int n, const double* q, double* x) {
  double prod = q[0];
  for (int j = 1; j < n; ++j) {
    x[j - 1] = prod * std::cos(q[j]);
    prod *= std::sin(q[j]);
  }
  x[n - 1] = prod;
}

CartesianPoint to_cartesian(const SphericalPoint& g) {
  validate_spherical(g);
  CartesianPoint x(g.dim());
  std::array<double, kMaxDim> buf{};
  std::array<double, kMaxDim> q{};
  for (int i = 0; i < g.dim(); ++i) q[i] = g[i];
  to_cartesian_unchecked(g.dim(), q.data(), buf.data());
  for (int i = 0; i < g.dim(); ++i) x[i] = buf[i];
  return x;
}

SphericalPoint to_spherical(const CartesianPoint& x) {
  constexpr double pi = std::numbers::pi;
  const int n = x.dim();
  SphericalPoint g(n);
  // tail[j] = |(x_j, ..., x_{n-1})|, computed from the back for accuracy.
  std::array<double, kMaxDim + 1> tail{};
  for (int j = n - 1; j >= 0; --j) tail[j] = std::hypot(tail[j + 1], x[j]);
  g[0] = tail[0];
  for (int j = 1; j < n - 1; ++j) {
    if (tail[j - 1] == 0.0) break;  // later angles stay 0
    g[j] = std::atan2(tail[j], x[j - 1]);
  }
  if (tail[n - 2] != 0.0) {
    double az = std::atan2(x[n - 1], x[n - 2]);
    if (az < 0.0) az += 2.0 * pi;
    if (az >= 2.0 * pi) az = 0.0;
    g[n - 1] = az;
  }
  return g;
}

double jacobian_unchecked(int n, const double* q) {
  double jac = std::pow(q[0], n - 1);
  for (int j = 1; j < n - 1; ++j) {
    const double s = std::sin(q[j]);
    const int power = n - 1 - j;
    double sp = 1.0;
    for (int k = 0; k < power; ++k) sp *= s;
    jac *= sp;
  }
  return jac;
}

double jacobian(const SphericalPoint& g) {
  validate_spherical(g);
  std::array<double, kMaxDim> q{};
  for (int i = 0; i < g.dim(); ++i) q[i] = g[i];
  const double j = jacobian_unchecked(g.dim(), q.data());
  return j < 0.0 ? 0.0 : j;
}

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

}  // namespace hbergman
