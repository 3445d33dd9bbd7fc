#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hbergman/boxes.hpp"
#include "hbergman/quadrature.hpp"
#include "hbergman/symbols.hpp"

namespace hbergman {

struct CarlesonOptions {
  /// Prefix grid resolution for the general (non-radial) path.
  int cells_per_axis = 16;
  /// Per-cell rule of the prefix grid.
  QuadratureGrid grid{{4}, 1, 0, 0, 2};
  /// Radial symbols: factor psi_hat through a one-dimensional sweep.
  bool radial_fast_path = true;
  /// Minimum sub-panels across a radial interval, and Gauss nodes per panel.
  int radial_min_panels = 64;
  int radial_nodes = 6;
  /// Per-box rows are kept only for generations with at most this many boxes.
  std::size_t per_box_limit = 20000;
  /// Worker threads for the general path (0 = hardware concurrency).
  unsigned threads = 0;
};

struct PsiHat {
  double value = 0.0;
  /// Sup over the half-resolution sub-grid (every other grid line).
  double coarse = 0.0;
  [[nodiscard]] double refinement_delta() const { return value - coarse; }
};

/// sup over y in B of |int_{B(x^(j), y)} psi dV_lambda|, approximated from
/// below on a grid of anchored sub-boxes.
PsiHat psi_hat(const Symbol& psi, const BoxId& id, const MeasureSpec& spec, const CarlesonOptions& opts = {});

/// Running integral R(rho) = int_{r_lo}^{rho} r^{n-1} psi(r) (1-r^2)^lambda dr
/// on [r_lo, r_hi].
struct RadialSweep {
  /// sup |R| over all sub-panel ends.
  double sup_fine = 0.0;
  /// sup |R| over break points (or every other sub-panel end without breaks).
  double sup_coarse = 0.0;
  Complex total{};
  /// int_{r_lo}^{r_hi} r^{n-1} (1-r^2)^lambda dr.
  double weight_mass = 0.0;
  std::size_t panels = 0;
  std::size_t breaks = 0;
};

RadialSweep radial_sweep(const Symbol& psi, int n, double lambda, double r_lo, double r_hi,
                         const CarlesonOptions& opts = {});

struct RadialCondition {
  int m = 0;
  double value = 0.0;
  double value_coarse = 0.0;
  std::size_t breaks = 0;
};

/// M_m = 2^{m(1+lambda)} sup_rho |R(rho)| over the generation-m radial
/// interval, for m = 0..max_gen. Throws std::invalid_argument for
/// non-radial symbols.
std::vector<RadialCondition> radial_condition(const Symbol& psi, const MeasureSpec& spec, int max_gen,
                                              const CarlesonOptions& opts = {});

struct CarlesonRow {
  BoxId id;
  double psi_hat = 0.0;
  double volume = 0.0;
  double ratio = 0.0;
};

struct CarlesonReport {
  int n = 2;
  double lambda = 0.0;
  int max_gen = 0;
  bool radial_path = false;
  std::vector<CarlesonRow> per_box;
  /// Generations whose rows were dropped because of per_box_limit.
  std::vector<int> omitted_generations;
  std::vector<std::pair<int, double>> per_generation_sup;
  std::vector<std::pair<int, double>> per_generation_sup_coarse;
  double c_psi_estimate = 0.0;
  bool bounded_certificate = false;
  bool vanishing_certificate = false;
  /// c_psi_estimate on the half-resolution grid and on the full grid.
  std::pair<double, double> grid_convergence{};

  /// Successive ratios sup_{m+1} / sup_m.
  [[nodiscard]] std::vector<double> trend_ratios() const;
  [[nodiscard]] nlohmann::json to_json() const;
  [[nodiscard]] std::string to_csv() const;
};

/// bounded: the last three per-generation sups are non-increasing or lie
/// within 10% of each other. vanishing: the last sup is below half the sup
/// three generations earlier. Both are heuristics over m <= max_gen.
bool bounded_verdict(const std::vector<double>& sups);
bool vanishing_verdict(const std::vector<double>& sups);

CarlesonReport carleson_report(const Symbol& psi, const MeasureSpec& spec, int max_gen,
                               const CarlesonOptions& opts = {});

/// (1/|E_r(x)|) int_{E_r(x)} psi dV with E_r(x) = {|y - x| < r(1 - |x|)}.
Complex classical_average(const Symbol& psi, const CartesianPoint& x, double r, const QuadratureGrid& grid = {{8}, 4, 0});
double classical_average_abs(const Symbol& psi, const CartesianPoint& x, double r,
                             const QuadratureGrid& grid = {{8}, 4, 0});

}  // namespace hbergman
