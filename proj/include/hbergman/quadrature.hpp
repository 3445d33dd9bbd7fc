#pragma once

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hbergman/boxes.hpp"
#include "hbergman/geometry.hpp"

namespace hbergman {

using Complex = std::complex<double>;
using Integrand = std::function<Complex(const CartesianPoint&)>;
using RealFunction = std::function<double(const CartesianPoint&)>;

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Weighted measure dV_lambda = c(n, lambda) (1 - |x|^2)^lambda dV with dV
/// the normalized volume (total mass 1).
struct MeasureSpec {
  int n = 2;
  double lambda = 0.0;
  double c_norm = 1.0;

  /// Validates lambda > -1 and n >= 2 and fills c_norm.
  static MeasureSpec make(int n, double lambda);
};

struct NormSpec {
  double p = 2.0;
  double q = 2.0;
  static NormSpec make(double p);
};

/// Tensor Gauss-Legendre layout used on every coordinate box.
///
/// nodes_per_axis[0] is the radial count, later entries the angular axes; a
/// shorter vector repeats its last entry. With angular_taper > 0 the angular
/// counts on a generation-m box drop by angular_taper * m, never below
/// min_angular_nodes (boxes shrink like 2^-m in every angular direction).
struct QuadratureGrid {
  std::vector<int> nodes_per_axis{8};
  int panels_per_axis = 1;
  int refinement_level = 1;
  int angular_taper = 0;
  int min_angular_nodes = 2;

  [[nodiscard]] int nodes_on_axis(int axis, int generation) const;
  /// Same layout with twice the panels per axis.
  [[nodiscard]] QuadratureGrid refined() const;
  void validate() const;
};

/// A product of closed coordinate intervals in Q_n.
struct CoordBox {
  int dim = 0;
  std::array<Interval, kMaxDim> q{};
  /// Generation used for angular tapering (0 for generic boxes).
  int generation = 0;
};

CoordBox coord_box(const DyadicBox& box);

struct IntegralEstimate {
  Complex value{};
  double error = 0.0;
};

double normalization_constant(int n, double lambda);

/// Radial-angular density factor c(n,lambda) w^lambda J_sigma / |B_n| at q.
double measure_density(const MeasureSpec& spec, const double* q);

/// Visits every tensor node of `box` with its full weight (Gauss weight times
/// measure density). The callback receives the Cartesian image and the
/// Q_n coordinates.
void for_each_node(const CoordBox& box, const MeasureSpec& spec, const QuadratureGrid& grid,
                   const std::function<void(const CartesianPoint&, const double*, double)>& visit);

/// Integral of f over sigma(box) against dV_lambda. The value is taken at the
/// finest level; error is the difference to the next coarser level (zero
/// when refinement_level == 0). Throws NumericalError on non-finite values.
IntegralEstimate integrate_box(const Integrand& f, const CoordBox& box, const MeasureSpec& spec,
                               const QuadratureGrid& grid);

/// |B|_lambda. Uses the product structure of the density (one-dimensional
/// Gauss-Legendre factors), not the tensor rule.
double box_volume(const BoxId& id, const MeasureSpec& spec);
double box_volume(const DyadicBox& box, const MeasureSpec& spec);

/// Cumulative integrals of f over B(x^(j), y_g) for every corner y_g of a
/// uniform cells^n subdivision of Q_j, anchored at x^(j). values has cells^n
/// entries; oriented index i along an axis means the corner i+1 cells away
/// from x^(j).
struct PrefixGrid {
  int dim = 0;
  int cells = 0;
  std::vector<Complex> values;

  [[nodiscard]] const Complex& at(const std::array<int, kMaxDim>& idx) const;
  [[nodiscard]] const Complex& far_corner() const { return values.back(); }
};

PrefixGrid prefix_integrals(const Integrand& f, const DyadicBox& box, const MeasureSpec& spec,
                            int cells_per_axis, const QuadratureGrid& grid);

/// Sum of integrate_box over all boxes of generations 0..max_gen, combined by
/// pairwise reduction in enumeration order. With refinement_level > 0 the
/// error is the difference to a whole-ball pass on the coarser grid.
IntegralEstimate integrate_ball(const Integrand& f, const MeasureSpec& spec, int max_gen,
                                const QuadratureGrid& grid);

/// (integral of |f|^p over the covered region)^{1/p}.
double norm_p(const Integrand& f, const NormSpec& norm, const MeasureSpec& spec, int max_gen,
              const QuadratureGrid& grid);

/// dV_lambda mass of the shell a <= |x| <= b (regularized incomplete Beta).
double shell_mass(int n, double lambda, double a, double b);

/// dV_lambda mass of a <= |x| < 1.
double outer_shell_mass(int n, double lambda, double a);

/// Pairwise (tree) sum in the given order.
Complex pairwise_sum(std::span<const Complex> values);
double pairwise_sum(std::span<const double> values);

/// Streaming form of pairwise_sum: add() values in order, total() gives the
/// same tree reduction without storing the whole sequence.
template <class T>
class PairwiseAccumulator {
 public:
  void add(T v) {
    std::size_t level = 0;
    while (!stack_.empty() && stack_.back().second == level) {
      v = stack_.back().first + v;
      stack_.pop_back();
      ++level;
    }
    stack_.emplace_back(v, level);
  }
  [[nodiscard]] T total() const {
    T acc{};
    bool first = true;
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
      acc = first ? it->first : it->first + acc;
      first = false;
    }
    return acc;
  }

 private:
  std::vector<std::pair<T, std::size_t>> stack_;
};

}  // namespace hbergman
