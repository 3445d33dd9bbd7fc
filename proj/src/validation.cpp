#include "hbergman/validation.hpp"

#include <algorithm>
#include <bit>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "hbergman/special.hpp"
#include "hbergman/spherical_map.hpp"

namespace hbergman {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Rng = std::mt19937_64;

CartesianPoint random_direction(Rng& rng, int n) {
  std::normal_distribution<double> g;
  CartesianPoint x(n);
  double s = 0.0;
  do {
    for (int i = 0; i < n; ++i) x[i] = g(rng);
    s = x.norm();
  } while (s < 1e-12);
  return (1.0 / s) * x;
}

// 1 - |x| log-uniform in [floor, 1].
CartesianPoint random_point_logshell(Rng& rng, int n, double floor) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double gap = std::pow(floor, u(rng));
  return (1.0 - gap) * random_direction(rng, n);
}

CartesianPoint random_in_ball(Rng& rng, int n, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return radius * std::pow(u(rng), 1.0 / n) * random_direction(rng, n);
}

SphericalPoint random_in_q(Rng& rng, const DyadicBox& box) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SphericalPoint g(box.dim());
  for (int a = 0; a < box.dim(); ++a) {
    const auto& iv = box.q[static_cast<std::size_t>(a)];
    g[a] = iv.lo + u(rng) * iv.width();
  }
  return g;
}

// A point of B* = B + delta B_n.
CartesianPoint random_in_enlarged(Rng& rng, const DyadicBox& box) {
  return to_cartesian(random_in_q(rng, box)) + random_in_ball(rng, box.dim(), box.enlargement_radius);
}

std::vector<BoxId> pick(Rng& rng, std::vector<BoxId> ids, std::size_t count) {
  if (ids.size() <= count) return ids;
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(count);
  std::sort(ids.begin(), ids.end());
  return ids;
}

void grow(GenerationBand& b, double v) {
  b.lo = std::min(b.lo, v);
  b.hi = std::max(b.hi, v);
}

GenerationBand empty_band(int m) { return {m, kInf, -kInf}; }

double band_drift(const GenerationBand& prev, const GenerationBand& cur, bool both_ends) {
  double d = std::abs(cur.hi / prev.hi - 1.0);
  if (both_ends) d = std::max(d, std::abs(cur.lo / prev.lo - 1.0));
  return d;
}

nlohmann::json band_json(const std::vector<GenerationBand>& bands) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& b : bands) out.push_back({{"m", b.m}, {"lo", b.lo}, {"hi", b.hi}});
  return out;
}

// Tensor Gauss-Legendre over prod [lo_k, hi_k] for the axes listed in `axes`;
// other coordinates of pt keep their values.
template <class F>
double tensor_integral(int dim, const std::vector<int>& axes, const double* lo, const double* hi, int nodes,
                       double* pt, F&& f) {
  const auto& gl = gauss_legendre(nodes);
  const std::size_t k = axes.size();
  if (k == 0) return f(pt);
  std::vector<int> idx(k, 0);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t a = 0; a < k; ++a) {
      const int ax = axes[a];
      const double half = 0.5 * (hi[ax] - lo[ax]), mid = 0.5 * (hi[ax] + lo[ax]);
      pt[ax] = mid + half * gl.nodes[static_cast<std::size_t>(idx[a])];
      w *= half * gl.weights[static_cast<std::size_t>(idx[a])];
    }
    total += w * f(pt);
    std::size_t a = 0;
    while (a < k && ++idx[a] == nodes) idx[a++] = 0;
    if (a == k) break;
  }
  (void)dim;
  return total;
}

Polynomial differentiate(Polynomial p, const std::vector<int>& alpha) {
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    for (int e = 0; e < alpha[i]; ++e) p = p.derivative(static_cast<int>(i));
  }
  return p;
}

}  // namespace

nlohmann::json ValidationThresholds::to_json() const {
  return {{"forelli_rudin_spread", forelli_rudin_spread},
          {"schur_spread", schur_spread},
          {"quadrature_rel_error", quadrature_rel_error},
          {"volume_band_drift", volume_band_drift},
          {"diameter_bound", diameter_bound},
          {"enlarged_volume_bound", enlarged_volume_bound},
          {"mean_value_spread", mean_value_spread},
          {"ibp_residual", ibp_residual},
          {"cbeta_drift", cbeta_drift},
          {"pointwise_bound", pointwise_bound},
          {"norm_domination_bound", norm_domination_bound},
          {"kernel_derivative_bound", kernel_derivative_bound}};
}

ValidationThresholds ValidationThresholds::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("thresholds: expected a JSON object");
  ValidationThresholds th;
  const nlohmann::json defaults = th.to_json();
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) throw std::invalid_argument("thresholds: unknown key '" + key + "'");
    if (!value.is_number()) throw std::invalid_argument("thresholds: '" + key + "' must be a number");
  }
  auto get = [&](const char* key, double& field) {
    if (j.contains(key)) field = j.at(key).get<double>();
  };
  get("forelli_rudin_spread", th.forelli_rudin_spread);
  get("schur_spread", th.schur_spread);
  get("quadrature_rel_error", th.quadrature_rel_error);
  get("volume_band_drift", th.volume_band_drift);
  get("diameter_bound", th.diameter_bound);
  get("enlarged_volume_bound", th.enlarged_volume_bound);
  get("mean_value_spread", th.mean_value_spread);
  get("ibp_residual", th.ibp_residual);
  get("cbeta_drift", th.cbeta_drift);
  get("pointwise_bound", th.pointwise_bound);
  get("norm_domination_bound", th.norm_domination_bound);
  get("kernel_derivative_bound", th.kernel_derivative_bound);
  return th;
}

RatioStats RatioStats::from(const std::vector<double>& ratios, double bound, const std::string& criterion) {
  if (criterion != "spread" && criterion != "max") throw std::invalid_argument("ratio stats: unknown criterion");
  RatioStats s;
  s.samples = ratios.size();
  s.bound = bound;
  s.criterion = criterion;
  if (ratios.empty()) return s;
  s.min_ratio = *std::min_element(ratios.begin(), ratios.end());
  s.max_ratio = *std::max_element(ratios.begin(), ratios.end());
  s.spread = s.min_ratio > 0.0 ? s.max_ratio / s.min_ratio : kInf;
  const bool finite = std::all_of(ratios.begin(), ratios.end(), [](double r) { return std::isfinite(r); });
  s.pass = finite && (criterion == "spread" ? s.spread < bound : s.max_ratio < bound);
  return s;
}

nlohmann::json RatioStats::to_json() const {
  return {{"samples", samples}, {"min_ratio", min_ratio}, {"max_ratio", max_ratio}, {"spread", spread},
          {"bound", bound},     {"criterion", criterion}, {"pass", pass}};
}

double forelli_rudin_integral(int n, double a, double t, double rho, double* rel_error) {
  if (n < 2 || n > kMaxDim) throw DimensionError("forelli-rudin: bad dimension");
  if (!(t > -1.0)) throw std::invalid_argument("forelli-rudin: t must exceed -1");
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("forelli-rudin: |x| must lie in [0, 1)");
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  // Sphere average of |zeta - u e_1|^{-a} = 2F1(a/2, a/2 - n/2 + 1; n/2; u^2),
  // summed directly (positive ratio u^2 < 1 in the tail).
  const double c1 = 0.5 * a, c2 = 0.5 * a - 0.5 * n + 1.0, c3 = 0.5 * n;
  auto angular = [&](double u) {
    const double z = u * u;
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 10000000; ++k) {
      term *= (c1 + k) * (c2 + k) / ((c3 + k) * (k + 1.0)) * z;
      sum += term;
      if (term == 0.0 || (k > 8 && std::abs(term) < 1e-17 * std::abs(sum))) break;
    }
    return sum;
  };
  // For t < 0 substitute 1 - r = v^K, K = 1/(1+t), which absorbs the
  // endpoint singularity (1-r)^t into dr.
  const double K = t < 0.0 ? 1.0 / (1.0 + t) : 1.0;
  auto radial = [&](double w) {
    const double d = std::pow(w, K), r = 1.0 - d;
    const double jac = t < 0.0 ? K * std::pow(2.0 - d, t) : std::pow(d * (2.0 - d), t);
    return n * std::pow(r, n - 1) * jac * angular(rho * r);
  };
  // The integrand peaks within a few (1 - rho) of r = 1.
  std::vector<double> cuts{1.0};
  for (double c : {1000.0, 100.0, 10.0, 1.0}) {
    const double d = c * (1.0 - rho);
    if (d < 1.0) cuts.push_back(std::pow(d, 1.0 / K));
  }
  cuts.push_back(0.0);
  double v = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double e = 0.0;
    // Tighter tolerances stall on the rounding noise of the series near u = 1.
    v += GK::integrate(radial, cuts[i + 1], cuts[i], 15, 1e-8, &e);
    err += e;
  }
  if (rel_error) *rel_error = v != 0.0 ? err / std::abs(v) : kInf;
  return v;
}

RatioStats check_forelli_rudin(int n, double s, double t, const std::vector<double>& radii,
                               const ValidationThresholds& th) {
  if (!(s > 0.0)) throw std::invalid_argument("forelli-rudin: s must be positive");
  std::vector<double> ratios;
  for (double rho : radii) {
    double rel = 0.0;
    const double lhs = forelli_rudin_integral(n, n + s + t, t, rho, &rel);
    if (!std::isfinite(lhs) || !(rel <= th.quadrature_rel_error)) {
      throw NumericalError("forelli-rudin: quadrature error estimate " + std::to_string(rel) + " at |x| = " +
                           std::to_string(rho) + " exceeds the threshold");
    }
    ratios.push_back(lhs * std::pow(1.0 - rho * rho, s));
  }
  return RatioStats::from(ratios, th.forelli_rudin_spread, "spread");
}

SchurProbe check_schur_probe(int n, double lambda, double p, double alpha, int samples, std::uint64_t seed,
                             const ValidationThresholds& th) {
  const NormSpec norm = NormSpec::make(p);
  const double q = norm.q;
  const double lo = (-1.0 - lambda) / std::max(p, q);
  if (!(alpha > lo && alpha < 0.0)) throw std::invalid_argument("schur probe: alpha outside the admissible range");
  const MeasureSpec spec = MeasureSpec::make(n, lambda);
  SchurProbe out;
  out.alpha = alpha;
  out.q = q;
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  out.radii = {0.0, 0.999};
  for (int i = 0; i < samples; ++i) out.radii.push_back(1.0 - std::pow(1e-3, u(rng)));
  auto stats = [&](double exponent) {
    std::vector<double> ratios;
    for (double rho : out.radii) {
      double rel = 0.0;
      const double v = spec.c_norm * forelli_rudin_integral(n, n + lambda, alpha * exponent + lambda, rho, &rel);
      if (!(rel <= th.quadrature_rel_error)) throw NumericalError("schur probe: quadrature error above threshold");
      ratios.push_back(v / std::pow(1.0 - rho * rho, alpha * exponent));
    }
    return RatioStats::from(ratios, th.schur_spread, "spread");
  };
  out.primal = stats(q);
  out.dual = stats(p);
  return out;
}

bool BoxPropertiesReport::pass() const {
  return volume_pass && diameter_pass && enlarged_pass && overlap_pass && shell_pass && bracket_pass;
}

nlohmann::json BoxPropertiesReport::to_json() const {
  nlohmann::json ov = nlohmann::json::array();
  for (const auto& [m, v] : overlap) ov.push_back({{"m", m}, {"max_overlap", v}});
  return {{"n", n},
          {"max_gen", max_gen},
          {"seed", seed},
          {"samples", samples},
          {"volume_band", band_json(volume)},
          {"volume_max_drift", volume_max_drift},
          {"volume_pass", volume_pass},
          {"diameter_band", band_json(diameter)},
          {"diameter_pass", diameter_pass},
          {"enlarged_ratio_band", band_json(enlarged)},
          {"enlarged_pass", enlarged_pass},
          {"overlap", ov},
          {"overlap_pass", overlap_pass},
          {"shell_band", {{"lo", shell.lo}, {"hi", shell.hi}}},
          {"shell_pass", shell_pass},
          {"bracket_constant", bracket_constant},
          {"bracket_violations", bracket_violations},
          {"bracket_pass", bracket_pass},
          {"pass", pass()}};
}

int empirical_overlap(int n, int m, int samples, std::uint64_t seed) {
  std::seed_seq seq{seed, static_cast<std::uint64_t>(m)};
  Rng rng(seq);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto ids = enumerate_generation(n, m);
  std::uniform_int_distribution<std::size_t> which(0, ids.size() - 1);
  int best = 0;
  for (int i = 0; i < samples; ++i) {
    CartesianPoint x;
    if (i % 2 == 0) {
      const double gap = std::ldexp(1.0, -m - 1) * (1.0 + u(rng));
      x = (1.0 - gap) * random_direction(rng, n);
    } else {
      // Overlap peaks where many boxes meet, so every other sample sits
      // within 5% of a random corner of a random box.
      const DyadicBox box = box_geometry(ids[which(rng)]);
      SphericalPoint g(n);
      for (int a = 0; a < n; ++a) {
        const auto& iv = box.q[static_cast<std::size_t>(a)];
        const double off = 0.05 * (iv.hi - iv.lo) * u(rng);
        g[a] = u(rng) < 0.5 ? iv.lo + off : iv.hi - off;
      }
      x = to_cartesian(g);
    }
    best = std::max(best, overlap_count(x, m - 2, m + 1));
  }
  return best;
}

BoxPropertiesReport check_box_properties(int n, int max_gen, int samples, std::uint64_t seed,
                                         const ValidationThresholds& th) {
  if (n < 2 || n > kMaxDim) throw DimensionError("box properties: bad dimension");
  if (max_gen < 0 || max_gen > 16) throw std::invalid_argument("box properties: max_gen must lie in [0, 16]");
  BoxPropertiesReport rep;
  rep.n = n;
  rep.max_gen = max_gen;
  rep.seed = seed;
  rep.samples = samples;
  Rng rng(seed);
  const MeasureSpec flat = MeasureSpec::make(n, 0.0);

  // (i) volume bands.
  for (int m = 0; m <= max_gen; ++m) {
    GenerationBand b = empty_band(m);
    const double scale = std::ldexp(1.0, m * n);
    for_each_box_id(n, m, [&](const BoxId& id) { grow(b, box_volume(id, flat) * scale); });
    rep.volume.push_back(b);
  }
  // Drift of the within-generation spread hi/lo.
  for (int m = 5; m <= max_gen; ++m) {
    const auto& prev = rep.volume[static_cast<std::size_t>(m - 1)];
    const auto& cur = rep.volume[static_cast<std::size_t>(m)];
    const double d = std::abs((cur.hi / cur.lo) / (prev.hi / prev.lo) - 1.0);
    rep.volume_max_drift = std::max(rep.volume_max_drift, d);
  }
  rep.volume_pass = rep.volume_max_drift < th.volume_band_drift;

  // (ii) diameters from corners, edge midpoints and interior samples.
  rep.diameter_pass = true;
  for (int m = 0; m <= max_gen; ++m) {
    GenerationBand b = empty_band(m);
    for (const BoxId& id : pick(rng, enumerate_generation(n, m), 32)) {
      const DyadicBox box = box_geometry(id);
      std::vector<CartesianPoint> pts;
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        for (int mid = -1; mid < n; ++mid) {
          SphericalPoint g(n);
          for (int a = 0; a < n; ++a) {
            const auto& iv = box.q[static_cast<std::size_t>(a)];
            g[a] = a == mid ? iv.mid() : ((mask >> a) & 1u) ? iv.hi : iv.lo;
          }
          pts.push_back(to_cartesian(g));
        }
      }
      for (int i = 0; i < 16; ++i) pts.push_back(to_cartesian(random_in_q(rng, box)));
      double diam = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) diam = std::max(diam, (pts[i] - pts[j]).norm());
      }
      grow(b, diam * std::ldexp(1.0, m));
    }
    rep.diameter.push_back(b);
    if (!(b.lo >= 1.0 / th.diameter_bound && b.hi <= th.diameter_bound)) rep.diameter_pass = false;
  }

  // (iii) |B*| / |B| by seeded Monte Carlo on a cube around B*.
  rep.enlarged_pass = true;
  for (int m = 0; m <= std::min(max_gen, 5); ++m) {
    GenerationBand b = empty_band(m);
    for (const BoxId& id : pick(rng, enumerate_generation(n, m), 3)) {
      const DyadicBox box = box_geometry(id);
      const double h = box.bound_radius + box.enlargement_radius;
      std::uniform_real_distribution<double> u(-h, h);
      const int count = 4000;
      int hits = 0;
      for (int i = 0; i < count; ++i) {
        CartesianPoint y = box.center;
        for (int a = 0; a < n; ++a) y[a] += u(rng);
        if (y.norm_sq() < 1.0 && enlarged_contains(box, y)) ++hits;
      }
      const double star = static_cast<double>(hits) / count * std::pow(2.0 * h, n) / unit_ball_volume(n);
      grow(b, star / box_volume(id, flat));
    }
    rep.enlarged.push_back(b);
    if (!(b.lo >= 1.0 && b.hi <= th.enlarged_volume_bound)) rep.enlarged_pass = false;
  }

  // (iv) overlap.
  for (int m = 3; m <= std::min(5, max_gen); ++m) rep.overlap.emplace_back(m, empirical_overlap(n, m, samples, seed));
  rep.overlap_pass = std::all_of(rep.overlap.begin(), rep.overlap.end(),
                                 [&](const auto& e) { return e.second == rep.overlap.front().second; });

  // (v) and (vi) on B* samples.
  rep.shell = {0, kInf, -kInf};
  const int per_gen = std::max(1, std::min(samples, 2000));
  for (int m = 0; m <= max_gen; ++m) {
    const auto ids = pick(rng, enumerate_generation(n, m), 16);
    const double scale = std::ldexp(1.0, m);
    for (int i = 0; i < per_gen; ++i) {
      const DyadicBox box = box_geometry(ids[static_cast<std::size_t>(i) % ids.size()]);
      const CartesianPoint a = random_in_enlarged(rng, box);
      const CartesianPoint b = random_in_enlarged(rng, box);
      grow(rep.shell, (1.0 - a.norm()) * scale);
      const CartesianPoint x = random_point_logshell(rng, n, 1e-4);
      const double ratio = bracket(x, a) / bracket(x, b);
      rep.bracket_constant = std::max(rep.bracket_constant, ratio);
      if (ratio > std::exp(hyperbolic_distance(a, b)) * (1.0 + 1e-12)) ++rep.bracket_violations;
    }
  }
  rep.shell_pass = rep.shell.lo >= 0.25 && rep.shell.hi <= 2.0;
  rep.bracket_pass = rep.bracket_violations == 0;
  return rep;
}

MeanValueResult check_mean_value(const Integrand& f, const BoxId& id, double lambda, int samples,
                                 std::uint64_t seed, int nodes_per_axis) {
  const DyadicBox box = box_geometry(id);
  const int n = box.dim();
  const MeasureSpec spec = MeasureSpec::make(n, lambda);
  MeanValueResult out;
  out.id = id;
  out.samples = samples;
  out.volume = box_volume(id, spec);
  Rng rng(seed);
  double fmax = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    SphericalPoint g(n);
    for (int a = 0; a < n; ++a) {
      const auto& iv = box.q[static_cast<std::size_t>(a)];
      g[a] = ((mask >> a) & 1u) ? iv.hi : iv.lo;
    }
    fmax = std::max(fmax, std::abs(f(to_cartesian(g))));
  }
  for (int i = 0; i < samples; ++i) fmax = std::max(fmax, std::abs(f(to_cartesian(random_in_q(rng, box)))));

  // Cartesian bounding box of sigma(Q) from a coordinate grid, padded by
  // 10% and the enlargement radius. bound_radius is far too loose for the
  // thin caps around the axes.
  std::vector<double> lo(static_cast<std::size_t>(n), kInf), hi(static_cast<std::size_t>(n), -kInf),
      pt(static_cast<std::size_t>(n));
  const int grid = 9;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    SphericalPoint g(n);
    for (int a = 0; a < n; ++a) {
      const auto& iv = box.q[static_cast<std::size_t>(a)];
      g[a] = iv.lo + (iv.hi - iv.lo) * idx[static_cast<std::size_t>(a)] / (grid - 1);
    }
    const CartesianPoint c = to_cartesian(g);
    for (int a = 0; a < n; ++a) {
      lo[static_cast<std::size_t>(a)] = std::min(lo[static_cast<std::size_t>(a)], c[a]);
      hi[static_cast<std::size_t>(a)] = std::max(hi[static_cast<std::size_t>(a)], c[a]);
    }
    int a = 0;
    while (a < n && ++idx[static_cast<std::size_t>(a)] == grid) idx[static_cast<std::size_t>(a++)] = 0;
    if (a == n) break;
  }
  std::vector<int> axes;
  for (int a = 0; a < n; ++a) {
    const auto k = static_cast<std::size_t>(a);
    const double pad = 0.1 * (hi[k] - lo[k]) + box.enlargement_radius;
    lo[k] -= pad;
    hi[k] += pad;
    axes.push_back(a);
  }
  const double density = spec.c_norm / unit_ball_volume(n);
  out.enlarged_integral = tensor_integral(n, axes, lo.data(), hi.data(), nodes_per_axis, pt.data(), [&](const double* y) {
    const CartesianPoint p(std::span<const double>(y, static_cast<std::size_t>(n)));
    const double w = 1.0 - p.norm_sq();
    if (w <= 0.0 || !enlarged_contains(box, p)) return 0.0;
    return density * std::pow(w, lambda) * std::abs(f(p));
  });
  out.ratio = out.enlarged_integral > 0.0 ? fmax * out.volume / out.enlarged_integral : (fmax > 0.0 ? kInf : 0.0);
  return out;
}

MeanValueSweep check_mean_value_generations(const Integrand& f, int n, double lambda, int m_lo, int m_hi,
                                            int boxes_per_generation, int samples, std::uint64_t seed,
                                            const ValidationThresholds& th) {
  MeanValueSweep out;
  Rng rng(seed);
  for (int m = m_lo; m <= m_hi; ++m) {
    std::vector<BoxId> off, axis;
    for_each_box_id(n, m, [&](const BoxId& id) { (n >= 3 && id.ladder[0] == 0 ? axis : off).push_back(id); });
    GenerationBand b = empty_band(m), ba = empty_band(m);
    for (const BoxId& id : pick(rng, off, static_cast<std::size_t>(boxes_per_generation))) {
      grow(b, check_mean_value(f, id, lambda, samples, seed).ratio);
    }
    out.ratios.push_back(b);
    if (!axis.empty()) {
      for (const BoxId& id : pick(rng, axis, static_cast<std::size_t>(boxes_per_generation))) {
        grow(ba, check_mean_value(f, id, lambda, samples, seed).ratio);
      }
      out.axis_ratios.push_back(ba);
    }
  }
  double hi = 0.0, lo = kInf;
  for (const auto* bands : {&out.ratios, &out.axis_ratios}) {
    for (const auto& b : *bands) {
      hi = std::max(hi, b.hi);
      lo = std::min(lo, b.hi);
    }
  }
  out.spread = lo > 0.0 ? hi / lo : kInf;
  out.pass = std::isfinite(hi) && out.spread < th.mean_value_spread;
  return out;
}

int ibp_sign(unsigned alpha_mask) { return (std::popcount(alpha_mask) % 2 == 0) ? 1 : -1; }

IbpResult check_integration_by_parts(const Polynomial& F, const Polynomial& G, const CoordBox& box, double lambda,
                                     int nodes_per_axis) {
  const int n = box.dim;
  if (F.dim != n || G.dim != n) throw DimensionError("integration by parts: polynomial dimension mismatch");
  if (!(lambda > -1.0)) throw std::invalid_argument("integration by parts: lambda must exceed -1");
  std::vector<double> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    const auto& iv = box.q[static_cast<std::size_t>(a)];
    if (!(iv.lo < iv.hi)) throw std::invalid_argument("integration by parts: non-rectangular box");
    lo[static_cast<std::size_t>(a)] = iv.lo;
    hi[static_cast<std::size_t>(a)] = iv.hi;
  }
  // r = 1 is fine unless w^lambda blows up there.
  if (!(lo[0] >= 0.0 && hi[0] <= 1.0 && (lambda >= 0.0 || hi[0] < 1.0))) {
    throw std::invalid_argument("integration by parts: radius interval outside the ball");
  }
  std::vector<int> all;
  for (int a = 0; a < n; ++a) all.push_back(a);
  auto as_point = [n](const double* g) { return CartesianPoint(std::span<const double>(g, static_cast<std::size_t>(n))); };
  auto mu = [&](const double* g) {
    return F(as_point(g)) * jacobian_unchecked(n, g) * std::pow(1.0 - g[0] * g[0], lambda);
  };
  // u(gamma) = int over Q(x, gamma) of F J w^lambda.
  auto u = [&](const double* gamma) {
    std::vector<double> top(gamma, gamma + n), pt(static_cast<std::size_t>(n));
    return tensor_integral(n, all, lo.data(), top.data(), nodes_per_axis, pt.data(), mu);
  };
  IbpResult out;
  {
    std::vector<double> pt(static_cast<std::size_t>(n));
    out.lhs = tensor_integral(n, all, lo.data(), hi.data(), nodes_per_axis, pt.data(),
                              [&](const double* g) { return mu(g) * G(as_point(g)); });
  }
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> alpha(static_cast<std::size_t>(n), 0), free;
    for (int a = 0; a < n; ++a) {
      if ((mask >> a) & 1u) {
        alpha[static_cast<std::size_t>(a)] = 1;
        free.push_back(a);
      }
    }
    const Polynomial dg = differentiate(G, alpha);
    double term = 0.0;
    if (!dg.terms.empty()) {
      std::vector<double> pt = hi;
      term = tensor_integral(n, free, lo.data(), hi.data(), nodes_per_axis, pt.data(),
                             [&](const double* g) { return u(g) * dg(as_point(g)); });
    }
    out.terms.push_back(ibp_sign(mask) * term);
    out.rhs += out.terms.back();
  }
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

namespace {

void validate_cbeta(const std::vector<int>& alpha, const std::vector<int>& beta, int n) {
  if (static_cast<int>(alpha.size()) != n || static_cast<int>(beta.size()) != n) {
    throw std::invalid_argument("c_beta: alpha and beta need one entry per coordinate");
  }
  int a1 = 0, b1 = 0;
  for (int a : alpha) {
    if (a != 0 && a != 1) throw std::invalid_argument("c_beta: alpha must be a 0/1 multi-index");
    a1 += a;
  }
  for (int b : beta) {
    if (b < 0) throw std::invalid_argument("c_beta: beta must be nonnegative");
    b1 += b;
  }
  if (a1 < 1 || b1 < 1 || b1 > a1) throw std::invalid_argument("c_beta: need 1 <= |beta| <= |alpha|");
}

int cbeta_exponent(const std::vector<int>& alpha, int beta_order, int c) {
  int s = 0;
  for (int i = 0; i <= c; ++i) s += alpha[static_cast<std::size_t>(i)];
  return std::max(0, beta_order - s);
}

}  // namespace

double cbeta_value(const std::vector<int>& alpha, int beta_order, const double* gamma, int n) {
  double v = 1.0;
  for (int c = 1; c <= n - 2; ++c) v *= std::pow(std::sin(gamma[c]), cbeta_exponent(alpha, beta_order, c));
  return v;
}

double check_cbeta_integral(const std::vector<int>& alpha, const std::vector<int>& beta, const BoxId& id) {
  const int n = id.dim;
  validate_cbeta(alpha, beta, n);
  int order = 0;
  for (int b : beta) order += b;
  const DyadicBox box = box_geometry(id);
  const auto& gl = gauss_legendre(16);
  double v = 1.0;
  // c_beta is a product of one-variable factors, so the integral factorizes.
  for (int c = 0; c < n; ++c) {
    const int e = (c >= 1 && c <= n - 2) ? cbeta_exponent(alpha, order, c) : 0;
    const auto& iv = box.q[static_cast<std::size_t>(c)];
    if (alpha[static_cast<std::size_t>(c)] == 1) {
      if (e == 0) {
        v *= iv.width();
      } else {
        double s = 0.0;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
          s += gl.weights[i] * std::pow(std::sin(iv.mid() + 0.5 * iv.width() * gl.nodes[i]), e);
        }
        v *= 0.5 * iv.width() * s;
      }
    } else {
      v *= std::pow(std::sin(box.q_max[c]), e);
    }
  }
  return v * std::ldexp(1.0, id.generation * order);
}

CbetaBand check_cbeta_band(int n, const std::vector<int>& alpha, const std::vector<int>& beta, int m_lo, int m_hi,
                           std::size_t max_boxes, std::uint64_t seed, const ValidationThresholds& th) {
  validate_cbeta(alpha, beta, n);
  CbetaBand out;
  Rng rng(seed);
  for (int m = m_lo; m <= m_hi; ++m) {
    GenerationBand b = empty_band(m);
    if (generation_size(n, m) <= max_boxes) {
      for_each_box_id(n, m, [&](const BoxId& id) { grow(b, check_cbeta_integral(alpha, beta, id)); });
    } else {
      for (const BoxId& id : pick(rng, enumerate_generation(n, m), max_boxes)) grow(b, check_cbeta_integral(alpha, beta, id));
    }
    out.bands.push_back(b);
  }
  std::vector<double> drift;
  for (std::size_t i = 1; i < out.bands.size(); ++i) {
    drift.push_back(band_drift(out.bands[i - 1], out.bands[i], false));
    out.max_drift = std::max(out.max_drift, drift.back());
  }
  // Bounded: the drift settles (non-increasing over the last three steps)
  // and the final step is small.
  out.last_drift = drift.empty() ? 0.0 : drift.back();
  bool settling = true;
  for (std::size_t i = drift.size() >= 3 ? drift.size() - 2 : 1; i < drift.size(); ++i) {
    if (drift[i] > drift[i - 1] + 1e-12) settling = false;
  }
  out.pass = !out.bands.empty() && std::isfinite(out.bands.back().hi) && settling && out.last_drift < th.cbeta_drift;
  return out;
}

double ball_norm(const Integrand& f, double p, double lambda, int n, const KernelConfig& cfg) {
  KernelConfig c = cfg;
  c.lambda = lambda;
  const BallRule& rule = BallRule::get(n, c);
  PairwiseAccumulator<double> sum;
  for (std::size_t i = 0; i < rule.size(); ++i) sum.add(rule.weights[i] * std::pow(std::abs(f(rule.nodes[i])), p));
  return std::pow(sum.total(), 1.0 / p);
}

RatioStats check_pointwise_estimate(const Polynomial& f, double p, double lambda, int samples, std::uint64_t seed,
                                    const KernelConfig& cfg, const ValidationThresholds& th) {
  if (!(p > 1.0 && std::isfinite(p))) throw std::invalid_argument("pointwise estimate: p must lie in (1, inf)");
  const int n = f.dim;
  const Integrand fi = [&](const CartesianPoint& x) { return Complex(f(x)); };
  const double norm = ball_norm(fi, p, lambda, n, cfg);
  if (!(norm > 0.0)) throw std::invalid_argument("pointwise estimate: f has zero norm");
  Rng rng(seed);
  std::vector<double> ratios;
  for (int i = 0; i < samples; ++i) {
    const CartesianPoint x = random_point_logshell(rng, n, 1e-3);
    ratios.push_back(std::abs(f(x)) * std::pow(weight(x), (n + lambda) / p) / norm);
  }
  return RatioStats::from(ratios, th.pointwise_bound, "max");
}

double check_norm_domination(const Polynomial& f, const std::vector<int>& alpha, double p, double lambda,
                             const KernelConfig& cfg) {
  if (static_cast<int>(alpha.size()) != f.dim) throw std::invalid_argument("norm domination: alpha size mismatch");
  int k = 0;
  for (int a : alpha) {
    if (a < 0) throw std::invalid_argument("norm domination: negative multi-index entry");
    k += a;
  }
  if (k < 1) throw std::invalid_argument("norm domination: need |alpha| >= 1");
  const Polynomial d = differentiate(f, alpha);
  const Integrand fi = [&](const CartesianPoint& x) { return Complex(f(x)); };
  const double fn = ball_norm(fi, p, lambda, f.dim, cfg);
  if (!(fn > 0.0)) throw std::invalid_argument("norm domination: f has zero norm");
  if (d.terms.empty()) return 0.0;
  const Integrand g = [&](const CartesianPoint& x) { return Complex(std::pow(weight(x), k) * d(x)); };
  return ball_norm(g, p, lambda, f.dim, cfg) / fn;
}

KernelConfig compact_support_outer_config() {
  KernelConfig c;
  c.max_gen = 1;
  c.grid = QuadratureGrid{{8, 12}, 1, 0, 4, 2};
  c.tail_radial_nodes = 8;
  c.tail_angular_nodes = 12;
  return c;
}

CompactSupportResult check_compact_support_bound(const Symbol& psi, int n, double p, double lambda,
                                                 const KernelConfig& inner, const KernelConfig& outer) {
  if (!(p > 1.0 && std::isfinite(p))) throw std::invalid_argument("compact support: p must lie in (1, inf)");
  const auto rho = psi.support_radius();
  if (!rho) throw std::invalid_argument("compact support: the symbol must be truncated");
  if (*rho > 0.9) throw DomainError("compact support: support radius above 0.9");
  KernelConfig in = inner, out_cfg = outer;
  in.lambda = out_cfg.lambda = lambda;
  CompactSupportResult out;
  out.support_radius = *rho;
  PairwiseAccumulator<double> l1;
  for_each_ball_node(n, in, &psi, [&](const CartesianPoint& y, double w, int) { l1.add(w * std::abs(psi(y))); });
  out.symbol_norm = l1.total();
  if (out.symbol_norm == 0.0) return out;
  const Integrand one = [](const CartesianPoint&) { return Complex(1.0); };
  const BallRule& rule = BallRule::get(n, out_cfg);
  PairwiseAccumulator<double> lp;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Complex v = toeplitz_apply(psi, one, rule.nodes[i], in).value;
    lp.add(rule.weights[i] * std::pow(std::abs(v), p));
  }
  out.projection_norm = std::pow(lp.total(), 1.0 / p);
  out.ratio = out.projection_norm / out.symbol_norm;
  return out;
}

RatioStats check_kernel_derivative_growth(int n, double lambda, int samples, std::uint64_t seed,
                                          const KernelConfig& cfg, const ValidationThresholds& th) {
  KernelConfig c = cfg;
  c.lambda = lambda;
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> ratios;
  const double h = 1e-5;
  for (int i = 0; i < samples; ++i) {
    const CartesianPoint y = random_point_logshell(rng, n, 1e-3);
    const double rx = std::min(0.999, 0.9 / std::max(y.norm(), 1e-12)) * std::pow(u(rng), 0.25);
    const CartesianPoint x = (rx - h) * random_direction(rng, n);
    double g2 = 0.0;
    for (int a = 0; a < n; ++a) {
      CartesianPoint xp = x, xm = x;
      xp[a] += h;
      xm[a] -= h;
      const double d = (reproducing_kernel(xp, y, c) - reproducing_kernel(xm, y, c)) / (2 * h);
      g2 += d * d;
    }
    ratios.push_back(std::sqrt(g2) * std::pow(bracket(x, y), n + lambda + 1));
  }
  return RatioStats::from(ratios, th.kernel_derivative_bound, "max");
}

const std::vector<std::string>& validation_check_names() {
  static const std::vector<std::string> names = {
      "forelli_rudin",      "schur_probe",          "box_properties", "mean_value",
      "integration_by_parts", "cbeta_integral",     "pointwise_estimate", "norm_domination",
      "compact_support_bound", "kernel_derivative_growth"};
  return names;
}

namespace {

using Json = nlohmann::json;

Json entry(Json constants, bool pass, std::uint64_t seed, std::size_t samples, Json parameters) {
  return {{"constants", std::move(constants)},
          {"pass", pass},
          {"seed", seed},
          {"samples", samples},
          {"parameters", std::move(parameters)}};
}

// Seeded random combination of the solid harmonics of degree <= 4.
Polynomial random_combination(Rng& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Polynomial p = Polynomial::constant(n, 0.0);
  for (const auto& e : harmonic_basis(n)) p = p + u(rng) * e.poly;
  return p.simplified();
}

Polynomial random_q_polynomial(Rng& rng, int n, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Polynomial p = Polynomial::constant(n, u(rng));
  for (int t = 0; t < 4; ++t) {
    Polynomial term = Polynomial::constant(n, u(rng));
    int left = degree;
    for (int a = 0; a < n && left > 0; ++a) {
      const int e = std::uniform_int_distribution<int>(0, left)(rng);
      for (int k = 0; k < e; ++k) term = term * Polynomial::variable(n, a);
      left -= e;
    }
    p = p + term;
  }
  return p.simplified();
}

CoordBox random_q_box(Rng& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CoordBox box{n, {}, 0};
  auto iv = [&](double top) {
    double a = u(rng) * top, b = u(rng) * top;
    if (a > b) std::swap(a, b);
    if (b - a < 0.05 * top) b = std::min(top, a + 0.05 * top), a = b - 0.05 * top;
    return Interval{a, b};
  };
  box.q[0] = iv(0.95);
  for (int a = 1; a < n - 1; ++a) box.q[static_cast<std::size_t>(a)] = iv(kPi);
  box.q[static_cast<std::size_t>(n - 1)] = iv(2 * kPi);
  return box;
}

Json run_forelli_rudin(std::uint64_t seed, const ValidationThresholds& th) {
  const std::vector<double> radii{0.5, 0.9, 0.99, 0.999};
  struct Set {
    int n;
    double s, t;
  };
  const std::vector<Set> sets{{2, 1.0, 0.0}, {3, 1.0, 0.0}, {2, 0.5, 1.0}, {3, 2.0, -0.5}};
  Json constants = Json::array(), params = Json::array();
  bool pass = true;
  std::size_t samples = 0;
  for (const auto& s : sets) {
    const RatioStats r = check_forelli_rudin(s.n, s.s, s.t, radii, th);
    constants.push_back({{"n", s.n}, {"s", s.s}, {"t", s.t}, {"stats", r.to_json()}});
    params.push_back({{"n", s.n}, {"s", s.s}, {"t", s.t}, {"radii", radii}});
    pass = pass && r.pass;
    samples += r.samples;
  }
  return entry(constants, pass, seed, samples, params);
}

Json run_schur(std::uint64_t seed, const ValidationThresholds& th) {
  struct Set {
    int n;
    double lambda, p;
  };
  const std::vector<Set> sets{{2, 0.0, 2.0}, {3, 1.0, 3.0}};
  const int samples = 16;
  Json constants = Json::array();
  bool pass = true;
  std::size_t total = 0;
  for (const auto& s : sets) {
    const double q = s.p / (s.p - 1.0);
    const double alpha = 0.5 * (-1.0 - s.lambda) / std::max(s.p, q);
    const SchurProbe r = check_schur_probe(s.n, s.lambda, s.p, alpha, samples, seed, th);
    constants.push_back({{"n", s.n}, {"lambda", s.lambda}, {"p", s.p}, {"alpha", alpha},
                         {"C_primal", r.primal.max_ratio}, {"C_dual", r.dual.max_ratio},
                         {"primal", r.primal.to_json()}, {"dual", r.dual.to_json()}});
    pass = pass && r.primal.pass && r.dual.pass;
    total += r.primal.samples + r.dual.samples;
  }
  return entry(constants, pass, seed, total, {{"alpha", "midpoint of the admissible range"}});
}

Json run_box_properties(std::uint64_t seed, const ValidationThresholds& th) {
  const int samples = 2000;
  Json constants = Json::array();
  bool pass = true;
  for (int n : {2, 3}) {
    const BoxPropertiesReport r = check_box_properties(n, 8, samples, seed, th);
    constants.push_back(r.to_json());
    pass = pass && r.pass();
  }
  return entry(constants, pass, seed, static_cast<std::size_t>(samples), {{"n", {2, 3}}, {"max_gen", 8}});
}

Json run_mean_value(std::uint64_t seed, const ValidationThresholds& th) {
  Json constants = Json::array();
  bool pass = true;
  const int samples = 64;
  for (int n : {2, 3}) {
    const std::vector<std::pair<std::string, Integrand>> fs{
        {"1", [](const CartesianPoint&) { return Complex(1.0); }},
        {"x1", [](const CartesianPoint& x) { return Complex(x[0]); }}};
    for (const auto& [label, f] : fs) {
      const MeanValueSweep r = check_mean_value_generations(f, n, 0.0, 2, 6, 3, samples, seed, th);
      constants.push_back({{"n", n}, {"f", label}, {"ratio_band", band_json(r.ratios)},
                           {"axis_ratio_band", band_json(r.axis_ratios)}, {"spread", r.spread}, {"pass", r.pass}});
      pass = pass && r.pass;
    }
  }
  return entry(constants, pass, seed, static_cast<std::size_t>(samples),
               {{"generations", {2, 6}}, {"boxes_per_generation", 3}, {"delta", 1.0}, {"lambda", 0.0}});
}

Json run_ibp(std::uint64_t seed, const ValidationThresholds& th) {
  Rng rng(seed);
  Json cases = Json::array();
  double worst = 0.0;
  // Calibration case: G = 1 leaves only the alpha = 0 term, with sign +1.
  {
    CoordBox box{2, {}, 0};
    box.q[0] = {0.2, 0.7};
    box.q[1] = {0.3, 2.0};
    const Polynomial F = Polynomial::variable(2, 0) * Polynomial::variable(2, 1) + Polynomial::constant(2, 0.5);
    const IbpResult r = check_integration_by_parts(F, Polynomial::constant(2, 1.0), box, 0.5);
    cases.push_back({{"case", "G = 1"}, {"residual", r.residual}});
    worst = std::max(worst, r.residual);
  }
  int count = 1;
  for (int n : {2, 3}) {
    for (int i = 0; i < 5; ++i) {
      const Polynomial F = random_q_polynomial(rng, n, 3), G = random_q_polynomial(rng, n, 3);
      const CoordBox box = random_q_box(rng, n);
      const double lambda = std::uniform_real_distribution<double>(-0.5, 2.0)(rng);
      const IbpResult r = check_integration_by_parts(F, G, box, lambda);
      cases.push_back({{"case", "random degree <= 3"}, {"n", n}, {"lambda", lambda}, {"residual", r.residual}});
      worst = std::max(worst, r.residual);
      ++count;
    }
  }
  return entry({{"max_residual", worst}, {"cases", cases},
                {"sign_convention", "s_alpha = (-1)^{|alpha|}, calibrated on G = 1 (only alpha = 0 survives, sign +1)"}},
               worst < th.ibp_residual, seed, static_cast<std::size_t>(count), {{"nodes_per_axis", 12}});
}

Json run_cbeta(std::uint64_t seed, const ValidationThresholds& th) {
  struct Set {
    int n;
    std::vector<int> alpha, beta;
  };
  const std::vector<Set> sets{{2, {1, 0}, {1, 0}},       {2, {1, 1}, {2, 0}},       {3, {1, 0, 0}, {1, 0, 0}},
                              {3, {1, 1, 0}, {2, 0, 0}}, {3, {1, 0, 1}, {2, 0, 0}}, {3, {0, 1, 1}, {2, 0, 0}},
                              {3, {0, 0, 1}, {1, 0, 0}}, {3, {1, 1, 1}, {3, 0, 0}}, {3, {1, 1, 1}, {1, 1, 0}}};
  Json constants = Json::array();
  bool pass = true;
  for (const auto& s : sets) {
    const CbetaBand r = check_cbeta_band(s.n, s.alpha, s.beta, 2, 8, std::size_t{1} << 17, seed, th);
    constants.push_back({{"n", s.n}, {"alpha", s.alpha}, {"beta", s.beta}, {"band", band_json(r.bands)},
                         {"max_drift", r.max_drift}, {"last_drift", r.last_drift}, {"pass", r.pass}});
    pass = pass && r.pass;
  }
  return entry(constants, pass, seed, sets.size(), {{"generations", {2, 8}}});
}

Json run_pointwise(std::uint64_t seed, const ValidationThresholds& th) {
  Rng rng(seed);
  Json constants = Json::array();
  bool pass = true;
  const int samples = 200;
  std::size_t total = 0;
  for (int n : {2, 3}) {
    for (double lambda : {0.0, 1.0}) {
      for (int i = 0; i < 3; ++i) {
        const Polynomial f = random_combination(rng, n);
        const RatioStats r = check_pointwise_estimate(f, 2.0, lambda, samples, rng(), KernelConfig{}, th);
        constants.push_back({{"n", n}, {"lambda", lambda}, {"p", 2.0}, {"constant", r.max_ratio}, {"stats", r.to_json()}});
        pass = pass && r.pass;
        total += r.samples;
      }
    }
  }
  return entry(constants, pass, seed, total, {{"p", 2.0}, {"functions", "random degree <= 4 harmonic combinations"}});
}

Json run_norm_domination(std::uint64_t seed, const ValidationThresholds& th) {
  Rng rng(seed);
  Json constants = Json::array();
  double worst = 0.0;
  std::size_t count = 0;
  for (int n : {2, 3}) {
    const std::vector<std::vector<int>> alphas = n == 2 ? std::vector<std::vector<int>>{{1, 0}, {0, 1}, {2, 0}, {1, 1}}
                                                        : std::vector<std::vector<int>>{{1, 0, 0}, {0, 0, 1}, {1, 1, 0}, {0, 2, 1}};
    const Polynomial f = random_combination(rng, n);
    for (double lambda : {0.0, 1.0}) {
      for (double p : {1.5, 2.0, 3.0}) {
        for (const auto& alpha : alphas) {
          const double r = check_norm_domination(f, alpha, p, lambda);
          constants.push_back({{"n", n}, {"lambda", lambda}, {"p", p}, {"alpha", alpha}, {"ratio", r}});
          worst = std::max(worst, r);
          ++count;
        }
      }
    }
  }
  return entry({{"max_ratio", worst}, {"cases", constants}}, worst < th.norm_domination_bound, seed, count,
               {{"functions", "one random degree <= 4 harmonic combination per dimension"}});
}

Json run_compact_support(std::uint64_t seed, const ValidationThresholds&) {
  const int n = 2;
  const double p = 2.0, lambda = 0.0;
  const KernelConfig inner;
  const KernelConfig outer = compact_support_outer_config();
  const Symbol one = Symbol::constant(1.0);
  Json constants = Json::object();
  const auto zero = check_compact_support_bound(Symbol::truncated(Symbol::constant(0.0), 0.5), n, p, lambda, inner, outer);
  constants["zero_symbol_ratio"] = zero.ratio;
  Json radial = Json::array();
  for (double r : {0.5, 0.9}) {
    const auto res = check_compact_support_bound(Symbol::truncated(one, r), n, p, lambda, inner, outer);
    radial.push_back({{"r", r}, {"ratio", res.ratio}});
  }
  constants["radial_indicator"] = radial;
  // The first box of the generation containing radius r, cut at r, probes C(r).
  Json probe = Json::array();
  std::vector<double> ratios;
  for (double r : {0.5, 0.9}) {
    const int m = generation_of_radius(r - 1e-9);
    BoxId id;
    id.dim = n;
    id.generation = m;
    const auto res = check_compact_support_bound(Symbol::truncated(Symbol::box_restricted(one, id), r), n, p, lambda,
                                                 inner, outer);
    probe.push_back({{"r", r}, {"box", id.to_string()}, {"ratio", res.ratio}});
    ratios.push_back(res.ratio);
  }
  constants["box_probe"] = probe;
  const bool pass = zero.ratio == 0.0 && ratios[1] > ratios[0] && std::isfinite(ratios[1]);
  return entry(constants, pass, seed, 5, {{"n", n}, {"p", p}, {"lambda", lambda}});
}

Json run_kernel_growth(std::uint64_t seed, const ValidationThresholds& th) {
  Json constants = Json::array();
  bool pass = true;
  const int samples = 200;
  std::size_t total = 0;
  for (int n : {2, 3}) {
    for (double lambda : {0.0, 1.0}) {
      const RatioStats r = check_kernel_derivative_growth(n, lambda, samples, seed, KernelConfig{}, th);
      constants.push_back({{"n", n}, {"lambda", lambda}, {"constant", r.max_ratio}, {"stats", r.to_json()}});
      pass = pass && r.pass;
      total += r.samples;
    }
  }
  return entry(constants, pass, seed, total, {{"max_product", 0.9}});
}

}  // namespace

Json run_validation(const std::vector<std::string>& checks, std::uint64_t seed, const ValidationThresholds& th) {
  const auto& names = validation_check_names();
  for (const auto& c : checks) {
    if (std::find(names.begin(), names.end(), c) == names.end()) {
      throw std::invalid_argument("validate: unknown check '" + c + "'");
    }
  }
  const std::vector<std::string>& todo = checks.empty() ? names : checks;
  Json out = Json::object();
  for (const auto& c : todo) {
    if (c == "forelli_rudin") out[c] = run_forelli_rudin(seed, th);
    else if (c == "schur_probe") out[c] = run_schur(seed, th);
    else if (c == "box_properties") out[c] = run_box_properties(seed, th);
    else if (c == "mean_value") out[c] = run_mean_value(seed, th);
    else if (c == "integration_by_parts") out[c] = run_ibp(seed, th);
    else if (c == "cbeta_integral") out[c] = run_cbeta(seed, th);
    else if (c == "pointwise_estimate") out[c] = run_pointwise(seed, th);
    else if (c == "norm_domination") out[c] = run_norm_domination(seed, th);
    else if (c == "compact_support_bound") out[c] = run_compact_support(seed, th);
    else if (c == "kernel_derivative_growth") out[c] = run_kernel_growth(seed, th);
  }
  return out;
}

}  // namespace hbergman
