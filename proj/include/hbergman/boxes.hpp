#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hbergman/geometry.hpp"
#include "hbergman/spherical_map.hpp"

namespace hbergman {

/// Combinatorial index of a dyadic box.
///
/// `ladder` holds (k_2, ..., k_n) in its first dim-1 slots. Bit (j-1) of
/// `reflections` set means the polar axis theta_{j+1} (coordinate index j,
/// 1 <= j <= dim-2) is mirrored by theta -> pi - theta.
struct BoxId {
  int dim = 0;
  int generation = 0;
  std::array<int, kMaxDim - 1> ladder{};
  std::uint32_t reflections = 0;

  auto operator<=>(const BoxId&) const = default;
  [[nodiscard]] std::string to_string() const;
};

/// Throws std::invalid_argument unless the ladder satisfies
/// 0 <= k_n <= ... <= k_2 <= 2^m - 1 (n >= 3) or 0 <= k_2 <= 2^m - 1 (n = 2),
/// and the mask only touches polar axes.
void validate_box_id(const BoxId& id);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  [[nodiscard]] double width() const { return hi - lo; }
  [[nodiscard]] double mid() const { return 0.5 * (lo + hi); }
};

/// Geometric realization sigma(Q) of a BoxId.
struct DyadicBox {
  BoxId id;
  /// Closed coordinate intervals of Q per axis (radius first).
  std::array<Interval, kMaxDim> q{};
  /// Smallest / largest corner of Q under the mirrored partial order.
  SphericalPoint q_min;
  SphericalPoint q_max;
  /// +1 when q_min sits at the low end of the axis, -1 at the high end.
  std::array<int, kMaxDim> orientation{};
  double enlargement_radius = 0.0;
  /// Image of the coordinate midpoint and a radius bounding sigma(Q) around it.
  CartesianPoint center;
  double bound_radius = 0.0;

  [[nodiscard]] int dim() const { return id.dim; }
  /// Whether the spherical coordinates g lie in Q (closed, up to tol).
  [[nodiscard]] bool contains_spherical(const SphericalPoint& g, double tol = 0.0) const;
};

/// Number of boxes of generation m in dimension n.
std::size_t generation_size(int n, int m);

/// All boxes of generation m, ordered lexicographically by (ladder, mask).
std::vector<BoxId> enumerate_generation(int n, int m);

/// Streams the same sequence as enumerate_generation without materializing it.
void for_each_box_id(int n, int m, const std::function<void(const BoxId&)>& visit);

/// Coordinate intervals of Q for an id (no derived geometry).
std::array<Interval, kMaxDim> box_intervals(const BoxId& id);

DyadicBox box_geometry(const BoxId& id);

/// Geometries for a whole generation. Generations up to a size limit are
/// cached; the returned vector is immutable.
const std::vector<DyadicBox>& generation_boxes(int n, int m);

/// Generation m with 1 - 2^-m <= r < 1 - 2^-m-1.
int generation_of_radius(double r);

/// Unique box containing x under the half-open tie-break convention.
BoxId locate(const CartesianPoint& x);

/// Euclidean distance from x to sigma(Q) (projected Gauss-Newton over Q,
/// multi-start). Accurate well below 2^{-m-2}/100.
double distance_to_box(const DyadicBox& box, const CartesianPoint& x);

/// Membership in B* = B + 2^{-m-2} B_n.
bool enlarged_contains(const DyadicBox& box, const CartesianPoint& x);
bool enlarged_contains(const BoxId& id, const CartesianPoint& x);

/// Number of boxes with generation in [m_lo, m_hi] whose enlargement
/// contains x.
int overlap_count(const CartesianPoint& x, int m_lo, int m_hi);

}  // namespace hbergman
