#include "hbergman/geometry.hpp"

#include <cmath>
#include <string>

namespace hbergman {

CartesianPoint::CartesianPoint(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw DimensionError("dimension " + std::to_string(dim) + " outside [1, " +
                         std::to_string(kMaxDim) + "]");
  }
}

CartesianPoint::CartesianPoint(std::initializer_list<double> coords)
    : CartesianPoint(static_cast<int>(coords.size())) {
  std::size_t i = 0;
  for (double v : coords) c_[i++] = v;
}

CartesianPoint::CartesianPoint(std::span<const double> coords)
    : CartesianPoint(static_cast<int>(coords.size())) {
  for (std::size_t i = 0; i < coords.size(); ++i) c_[i] = coords[i];
}

double CartesianPoint::norm_sq() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += c_[i] * c_[i];
  return s;
}

double CartesianPoint::norm() const { return std::sqrt(norm_sq()); }

double CartesianPoint::dot(const CartesianPoint& o) const {
  require_same_dim(*this, o);
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += c_[i] * o.c_[i];
  return s;
}

CartesianPoint& CartesianPoint::operator+=(const CartesianPoint& o) {
  require_same_dim(*this, o);
  for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
  return *this;
}

CartesianPoint& CartesianPoint::operator-=(const CartesianPoint& o) {
  require_same_dim(*this, o);
  for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
  return *this;
}

CartesianPoint& CartesianPoint::operator*=(double s) {
  for (int i = 0; i < dim_; ++i) c_[i] *= s;
  return *this;
}

bool CartesianPoint::operator==(const CartesianPoint& o) const {
  if (dim_ != o.dim_) return false;
  for (int i = 0; i < dim_; ++i)
    if (c_[i] != o.c_[i]) return false;
  return true;
}

void require_same_dim(const CartesianPoint& a, const CartesianPoint& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
}

double weight(const CartesianPoint& x) {
  const double s = x.norm_sq();
  if (s > 1.0 + 1e-14) throw DomainError("weight: point outside the closed unit ball");
  return 1.0 - s;
}

double bracket(const CartesianPoint& x, const CartesianPoint& a) {
  const double xa = x.dot(a);
  const double v = 1.0 - 2.0 * xa + x.norm_sq() * a.norm_sq();
  // v = |x - a|^2 + w(x) w(a) >= 0 on the closed ball; clamp rounding.
  return std::sqrt(v > 0.0 ? v : 0.0);
}

namespace {
void require_open_ball(const CartesianPoint& p, const char* what) {
  if (!(p.norm_sq() < 1.0)) throw DomainError(std::string(what) + " must lie in the open unit ball");
}
}  // namespace

CartesianPoint mobius(const CartesianPoint& a, const CartesianPoint& x) {
  require_same_dim(a, x);
  require_open_ball(a, "mobius: a");
  require_open_ball(x, "mobius: x");
  const CartesianPoint diff = x - a;
  const double br = bracket(x, a);
  const double denom = br * br;
  CartesianPoint out = diff.norm_sq() * a - (1.0 - a.norm_sq()) * diff;
  out *= 1.0 / denom;
  return out;
}

double mobius_derivative_norm(const CartesianPoint& a, const CartesianPoint& x) {
  const double br = bracket(x, a);
  return weight(a) / (br * br);
}

double hyperbolic_distance(const CartesianPoint& a, const CartesianPoint& b) {
  const double t = mobius(a, b).norm();
  return std::log1p(t) - std::log1p(-t);
}

}  // namespace hbergman
