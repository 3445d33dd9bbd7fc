#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hbergman/boxes.hpp"
#include "hbergman/harmonic.hpp"
#include "hbergman/quadrature.hpp"
#include "hbergman/symbols.hpp"

namespace hbergman {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// Every pass/fail threshold of the lemma checks. Loadable from JSON so a
/// run can record (or override) exactly what it tested against.
struct ValidationThresholds {
  double forelli_rudin_spread = 10.0;
  double schur_spread = 10.0;
  /// Relative quadrature error above which an integral is rejected.
  double quadrature_rel_error = 0.01;
  double volume_band_drift = 0.10;
  double diameter_bound = 16.0;
  double enlarged_volume_bound = 100.0;
  double mean_value_spread = 10.0;
  double ibp_residual = 1e-8;
  double cbeta_drift = 0.10;
  double pointwise_bound = 10.0;
  double norm_domination_bound = 100.0;
  double kernel_derivative_bound = 1e3;

  [[nodiscard]] nlohmann::json to_json() const;
  /// Missing keys keep their defaults; unknown keys are rejected.
  static ValidationThresholds from_json(const nlohmann::json& j);
};

struct RatioStats {
  std::size_t samples = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  /// max/min (infinite when min is 0).
  double spread = 1.0;
  double bound = 0.0;
  /// "spread" or "max": which statistic is compared with bound.
  std::string criterion = "spread";
  bool pass = false;

  static RatioStats from(const std::vector<double>& ratios, double bound, const std::string& criterion);
  [[nodiscard]] nlohmann::json to_json() const;
};

/// int (1-|y|^2)^t / [x,y]^a dV(y) for |x| = rho (dV normalized), reduced to
/// a radial and a polar integral by rotation invariance. Adaptive
/// Gauss-Kronrod; rel_error receives the relative error estimate.
double forelli_rudin_integral(int n, double a, double t, double rho, double* rel_error = nullptr);

/// Ratios LHS (1-|x|^2)^s over |x| in radii, a = n+s+t. Throws
/// NumericalError when a quadrature error estimate exceeds the threshold.
RatioStats check_forelli_rudin(int n, double s, double t, const std::vector<double>& radii,
                               const ValidationThresholds& th = {});

struct SchurProbe {
  double alpha = 0.0;
  double q = 0.0;
  RatioStats primal;  // h^q against [x,y]^{-(n+lambda)} dV_lambda, over h(x)^q
  RatioStats dual;    // same with p in place of q
  std::vector<double> radii;
};

/// Requires (-1-lambda)/max(p,q) < alpha < 0. Sample radii 1-|x| are
/// log-uniform in [1e-3, 1], plus |x| = 0 and 0.999.
SchurProbe check_schur_probe(int n, double lambda, double p, double alpha, int samples,
                             std::uint64_t seed = kDefaultSeed, const ValidationThresholds& th = {});

struct GenerationBand {
  int m = 0;
  double lo = 0.0;
  double hi = 0.0;
};

struct BoxPropertiesReport {
  int n = 0;
  int max_gen = 0;
  std::uint64_t seed = kDefaultSeed;
  int samples = 0;
  std::vector<GenerationBand> volume;     // (i) |B| 2^{mn}
  double volume_max_drift = 0.0;          // of hi/lo, consecutive generations 4..max_gen
  bool volume_pass = false;
  std::vector<GenerationBand> diameter;   // (ii) diam 2^m
  bool diameter_pass = false;
  std::vector<GenerationBand> enlarged;   // (iii) |B*| / |B|
  bool enlarged_pass = false;
  std::vector<std::pair<int, int>> overlap;  // (iv) (m, empirical max)
  bool overlap_pass = false;
  GenerationBand shell;                   // (v) (1-|x|) 2^m on B* samples
  bool shell_pass = false;
  double bracket_constant = 0.0;          // (vi) max [x,a]/[x,b]
  std::size_t bracket_violations = 0;     // triples with ratio > e^{d(a,b)}
  bool bracket_pass = false;

  [[nodiscard]] bool pass() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Empirical constants for the six box properties. Overlap uses
/// generations 3, 4, 5 (those at most max_gen) with `samples` points each.
BoxPropertiesReport check_box_properties(int n, int max_gen, int samples, std::uint64_t seed = kDefaultSeed,
                                         const ValidationThresholds& th = {});

/// Max of overlap_count over points in the shell of generation m (window
/// m-2..m+1, every box whose B* can reach the shell). Half the samples are
/// uniform in the shell, half sit near corners of random boxes.
int empirical_overlap(int n, int m, int samples, std::uint64_t seed);

struct MeanValueResult {
  BoxId id;
  double ratio = 0.0;  // max |f(x)| |B|_lambda / int_{B*} |f| dV_lambda
  double volume = 0.0;
  double enlarged_integral = 0.0;
  int samples = 0;
};

/// int_{B*} |f| is a tensor Gauss rule over a Cartesian cube around B*
/// with the indicator of B*; x runs over seeded samples in B plus its corners.
MeanValueResult check_mean_value(const Integrand& f, const BoxId& id, double lambda, int samples,
                                 std::uint64_t seed = kDefaultSeed, int nodes_per_axis = 16);

struct MeanValueSweep {
  std::vector<GenerationBand> ratios;       // off-axis boxes
  std::vector<GenerationBand> axis_ratios;  // k_2 = 0 boxes (n >= 3)
  double spread = 0.0;
  bool pass = false;
};

MeanValueSweep check_mean_value_generations(const Integrand& f, int n, double lambda, int m_lo, int m_hi,
                                            int boxes_per_generation, int samples,
                                            std::uint64_t seed = kDefaultSeed, const ValidationThresholds& th = {});

struct IbpResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  /// One signed term per alpha (bit k of the index set = alpha_k = 1).
  std::vector<double> terms;
};

/// Sign in the box integration-by-parts formula: (-1)^{|alpha|}.
int ibp_sign(unsigned alpha_mask);

/// Both sides of the box integration-by-parts formula for F, G given as
/// polynomials in the Q_n coordinates (r, theta_2, ..., theta_n), weight
/// J_sigma w^lambda, corners x = lo and y = hi of `box`.
IbpResult check_integration_by_parts(const Polynomial& F, const Polynomial& G, const CoordBox& box, double lambda,
                                     int nodes_per_axis = 12);

/// c_beta(gamma) for the Q_n point gamma.
double cbeta_value(const std::vector<int>& alpha, int beta_order, const double* gamma, int n);

/// 2^{m|beta|} int_{Q_alpha(x,y)} c_beta d gamma_alpha for the box id.
double check_cbeta_integral(const std::vector<int>& alpha, const std::vector<int>& beta, const BoxId& id);

struct CbetaBand {
  std::vector<GenerationBand> bands;
  double max_drift = 0.0;  // of the per-generation max between consecutive m
  double last_drift = 0.0;
  bool pass = false;
};

/// Generations with more than max_boxes boxes use a seeded subsample. Pass
/// means bounded: the drift of the per-generation max is non-increasing over
/// the last three steps and the last one is below th.cbeta_drift.
CbetaBand check_cbeta_band(int n, const std::vector<int>& alpha, const std::vector<int>& beta, int m_lo, int m_hi,
                           std::size_t max_boxes = 4096, std::uint64_t seed = kDefaultSeed,
                           const ValidationThresholds& th = {});

/// (int |f|^p dV_lambda)^{1/p} over the ball rule of cfg (lambda taken from the argument).
double ball_norm(const Integrand& f, double p, double lambda, int n, const KernelConfig& cfg);

/// |f(x)| w(x)^{(n+lambda)/p} / ||f||_{p,lambda}; criterion "max".
RatioStats check_pointwise_estimate(const Polynomial& f, double p, double lambda, int samples,
                                    std::uint64_t seed = kDefaultSeed, const KernelConfig& cfg = {},
                                    const ValidationThresholds& th = {});

/// ||w^k D^alpha f|| / ||f|| with |alpha| = k >= 1 (alpha as exponents per coordinate).
double check_norm_domination(const Polynomial& f, const std::vector<int>& alpha, double p, double lambda,
                             const KernelConfig& cfg = {});

struct CompactSupportResult {
  double support_radius = 0.0;
  double projection_norm = 0.0;
  double symbol_norm = 0.0;
  double ratio = 0.0;
};

/// ||P_lambda psi||_{p,lambda} / ||psi||_{1,lambda}. psi needs a support
/// radius <= 0.9 (DomainError otherwise). P_lambda psi is evaluated with
/// `inner` at the nodes of the `outer` ball rule.
CompactSupportResult check_compact_support_bound(const Symbol& psi, int n, double p, double lambda,
                                                 const KernelConfig& inner, const KernelConfig& outer);

/// Light outer rule for check_compact_support_bound.
KernelConfig compact_support_outer_config();

/// max over samples with |x||y| <= 0.9 of |grad_x R_lambda| [x,y]^{n+lambda+1}
/// (central differences); criterion "max".
RatioStats check_kernel_derivative_growth(int n, double lambda, int samples, std::uint64_t seed = kDefaultSeed,
                                          const KernelConfig& cfg = {}, const ValidationThresholds& th = {});

/// Names accepted by run_validation.
const std::vector<std::string>& validation_check_names();

/// Runs the named checks (all when empty) on their declared parameter sets.
/// Returns {check_name: {constants, pass, seed, samples}}. Throws
/// std::invalid_argument for unknown names.
nlohmann::json run_validation(const std::vector<std::string>& checks, std::uint64_t seed = kDefaultSeed,
                              const ValidationThresholds& th = {});

}  // namespace hbergman
