#include "hbergman/carleson.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/math/special_functions/beta.hpp>

#include "hbergman/json_io.hpp"
#include "hbergman/special.hpp"

namespace hbergman {

namespace {

// Neumaier-compensated running sum; the sweeps add millions of tiny,
// alternating panel contributions.
struct CompensatedSum {
  Complex sum{};
  Complex carry{};

  static void step(double& s, double& c, double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v)) {
      c += (s - t) + v;
    } else {
      c += (v - t) + s;
    }
    s = t;
  }
  void add(Complex v) {
    double sr = sum.real(), si = sum.imag(), cr = carry.real(), ci = carry.imag();
    step(sr, cr, v.real());
    step(si, ci, v.imag());
    sum = {sr, si};
    carry = {cr, ci};
  }
  [[nodiscard]] Complex value() const { return sum + carry; }
};

// exp(i d) for |d| <= 0.5 by truncated series (error below 1e-16 there).
Complex small_expi(double d) {
  const double d2 = d * d;
  const double c = 1 - d2 / 2 * (1 - d2 / 12 * (1 - d2 / 30 * (1 - d2 / 56 * (1 - d2 / 90 * (1 - d2 / 132 * (1 - d2 / 182))))));
  const double sn = d * (1 - d2 / 6 * (1 - d2 / 20 * (1 - d2 / 42 * (1 - d2 / 72 * (1 - d2 / 110 * (1 - d2 / 156))))));
  return {c, sn};
}

double radial_weight_mass(int n, double lambda, double r_lo, double r_hi) {
  // int r^{n-1} (1-r^2)^lambda dr = B(n/2, lambda+1) / 2 * (I(b^2) - I(a^2)).
  return 0.5 * boost::math::beta(0.5 * n, lambda + 1.0) * shell_mass(n, lambda, r_lo, r_hi);
}

// Sweep for a section6 core whose (n, lambda) match the measure: the
// weighted integrand is f(x) exp(i pi g(x)) with dr = dx / x^2. Panels run
// between consecutive half-integer levels of g in x. Inside a narrow gap the
// phase is taken relative to the level, g(x) - k/2, from a short Taylor
// series of g about the gap start, which avoids reducing a huge g mod 2.
struct Section6Sweep {
  const Section6Params& p;
  const QuadratureRule1D& rule;
  double h_target;
  RadialSweep& out;
  CompensatedSum running;
  bool builtin;
  double c = 1.0, a = 0.0, s = 0.0;

  Section6Sweep(const Section6Params& params, const QuadratureRule1D& r, double h, RadialSweep& o)
      : p(params), rule(r), h_target(h), out(o), builtin(params.profile.type != ProfileType::Custom) {
    const double w = p.g_weight_exponent();
    if (p.profile.type == ProfileType::Const) {
      c = p.profile.value;
      a = w;
    } else if (p.profile.type == ProfileType::Power) {
      s = p.profile.exponent;
      a = s + w;
    }
  }

  // [x_a, x_b] with g(x_a) = g_a and exp(i pi g_a) = base.
  void gap(double x_a, double g_a, Complex base, double x_b) {
    if (!(x_b > x_a)) return;
    const int k = std::max(2, static_cast<int>(std::ceil((1.0 / x_a - 1.0 / x_b) / h_target - 1e-9)));
    const bool local = builtin && (x_b - x_a) < 1e-4 * x_a;
    double g1 = 0.0, f0 = 0.0;
    if (local) {
      g1 = c * std::pow(x_a, a + 1.0);
      f0 = p.profile(x_a);
    }
    const double a2 = a / 2, a3 = a * (a - 1) / 6, a4 = a * (a - 1) * (a - 2) / 24;
    const double s2 = s * (s - 1) / 2, s3 = s * (s - 1) * (s - 2) / 6;
    const double width = (x_b - x_a) / k;
    for (int i = 0; i < k; ++i) {
      const double lo = x_a + i * width;
      const double hi = i + 1 == k ? x_b : lo + width;
      const double half = 0.5 * (hi - lo);
      const double mid = 0.5 * (hi + lo);
      Complex panel{};
      if (local) {
        // One sincos at the midpoint; node offsets stay below pi/8 in phase.
        auto dg_at = [&](double x) {
          const double t = (x - x_a) / x_a;
          return g1 * t * (1 + t * (a2 + t * (a3 + t * a4)));
        };
        const double ph_mid = std::numbers::pi * dg_at(mid);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
          const double x = mid + half * rule.nodes[q];
          const double t = (x - x_a) / x_a;
          const double amp = f0 * (1 + t * (s + t * (s2 + t * s3)));
          panel += rule.weights[q] * amp / (x * x) * small_expi(std::numbers::pi * dg_at(x) - ph_mid);
        }
        panel *= Complex(std::cos(ph_mid), std::sin(ph_mid));
      } else {
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
          const double x = mid + half * rule.nodes[q];
          const double ph = std::numbers::pi * (g_of(p, x) - g_a);
          panel += rule.weights[q] * p.profile(x) / (x * x) * Complex(std::cos(ph), std::sin(ph));
        }
      }
      running.add(base * (half * panel));
      ++out.panels;
      // Squared moduli here; run() takes the roots.
      const double mod2 = std::norm(running.value());
      if (!std::isfinite(mod2)) throw NumericalError("radial_sweep: non-finite integrand");
      out.sup_fine = std::max(out.sup_fine, mod2);
      if ((i + 1) % 2 == 0 || i + 1 == k) out.sup_coarse = std::max(out.sup_coarse, mod2);
    }
  }

  void run(double x_lo, double x_cut) {
    double x_prev = x_lo;
    double g_prev = g_of(p, x_lo);
    Complex base = std::polar(1.0, std::numbers::pi * std::fmod(g_prev, 2.0));
    long long level = -1;
    static const Complex kQuarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for_each_g_level(p, x_lo, x_cut, 0.5, [&](double x) {
      if (!(x > x_prev && x < x_cut)) return;
      level = level < 0 ? std::llround(2.0 * g_of(p, x)) : level + 1;
      gap(x_prev, g_prev, base, x);
      ++out.breaks;
      x_prev = x;
      g_prev = 0.5 * static_cast<double>(level);
      base = kQuarter[level % 4];
    });
    gap(x_prev, g_prev, base, x_cut);
    out.sup_fine = std::sqrt(out.sup_fine);
    out.sup_coarse = std::sqrt(out.sup_coarse);
  }
};

}  // namespace

RadialSweep radial_sweep(const Symbol& psi, int n, double lambda, double r_lo, double r_hi,
                         const CarlesonOptions& opts) {
  if (!psi.is_radial()) throw std::invalid_argument("radial_sweep: symbol is not radial");
  if (!(0.0 <= r_lo && r_lo < r_hi && r_hi < 1.0)) throw std::invalid_argument("radial_sweep: need 0 <= r_lo < r_hi < 1");
  if (opts.radial_min_panels < 2 || opts.radial_nodes < 1) throw std::invalid_argument("radial_sweep: bad panel layout");

  const auto& rule = gauss_legendre(opts.radial_nodes);
  const double s_lo = 1.0 - r_hi;
  const double s_hi = 1.0 - r_lo;
  const double h_target = (r_hi - r_lo) / opts.radial_min_panels;

  RadialSweep out;
  out.weight_mass = radial_weight_mass(n, lambda, r_lo, r_hi);

  if (auto chain = psi.section6_chain(); chain && chain->params->n == n && chain->params->lambda == lambda) {
    const double x_lo = 1.0 / s_hi;
    const double x_cut = 1.0 / std::max(s_lo, 1.0 - chain->rho);
    Section6Sweep sw(*chain->params, rule, h_target, out);
    if (x_cut > x_lo) sw.run(x_lo, x_cut);
    const double scale = std::abs(chain->factor);
    const Complex t = sw.running.value();
    out.total = chain->factor * (chain->conjugated ? std::conj(t) : t);
    out.sup_fine *= scale;
    out.sup_coarse *= scale;
    return out;
  }
  CompensatedSum running;
  double s_prev = s_hi;

  // Integrates [s_prev, s_next] (s decreasing) in k sub-panels.
  auto gap = [&](double s_next, int k) {
    if (!(s_next < s_prev)) return;
    const double width = (s_prev - s_next) / k;
    for (int i = 0; i < k; ++i) {
      const double a = s_prev - i * width;
      const double b = i + 1 == k ? s_next : a - width;
      const double half = 0.5 * (a - b);
      const double mid = 0.5 * (a + b);
      Complex panel{};
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        panel += rule.weights[q] * psi.weighted_radial(mid + half * rule.nodes[q], n, lambda);
      }
      running.add(half * panel);
      ++out.panels;
      const double mod = std::abs(running.value());
      if (!std::isfinite(mod)) throw NumericalError("radial_sweep: non-finite integrand");
      out.sup_fine = std::max(out.sup_fine, mod);
      if ((i + 1) % 2 == 0 || i + 1 == k) out.sup_coarse = std::max(out.sup_coarse, mod);
    }
    s_prev = s_next;
  };
  auto subdivisions = [&](double s_next) {
    return std::max(2, static_cast<int>(std::ceil((s_prev - s_next) / h_target - 1e-9)));
  };

  std::optional<double> split;
  if (auto rho = psi.support_radius(); rho && *rho > r_lo && *rho < r_hi) split = 1.0 - *rho;

  const bool structured = psi.for_each_radial_break(r_lo, r_hi, [&](double s) {
    if (!(s < s_prev && s > s_lo)) return;
    if (split && *split > s) {
      gap(*split, subdivisions(*split));
      split.reset();
    }
    ++out.breaks;
    gap(s, subdivisions(s));
  });
  if (split) gap(*split, structured ? subdivisions(*split) : opts.radial_min_panels);
  gap(s_lo, structured ? subdivisions(s_lo) : std::max(2, static_cast<int>(std::ceil((s_prev - s_lo) / h_target - 1e-9))));
  out.total = running.value();
  return out;
}

std::vector<RadialCondition> radial_condition(const Symbol& psi, const MeasureSpec& spec, int max_gen,
                                              const CarlesonOptions& opts) {
  if (!psi.is_radial()) throw std::invalid_argument("radial_condition: symbol is not radial");
  if (max_gen < 0 || max_gen > 16) throw std::invalid_argument("radial_condition: max_gen outside [0, 16]");
  std::vector<RadialCondition> out;
  for (int m = 0; m <= max_gen; ++m) {
    const double r_lo = 1.0 - std::ldexp(1.0, -m);
    const double r_hi = 1.0 - std::ldexp(1.0, -m - 1);
    const RadialSweep sw = radial_sweep(psi, spec.n, spec.lambda, r_lo, r_hi, opts);
    const double scale = std::exp2(m * (1.0 + spec.lambda));
    out.push_back({m, scale * sw.sup_fine, scale * sw.sup_coarse, sw.breaks});
  }
  return out;
}

PsiHat psi_hat(const Symbol& psi, const BoxId& id, const MeasureSpec& spec, const CarlesonOptions& opts) {
  if (id.dim != spec.n) throw DimensionError("psi_hat: dimension mismatch");
  const DyadicBox box = box_geometry(id);
  if (opts.radial_fast_path && psi.is_radial()) {
    // The anchored sub-box integral factors as R(rho) times an angular mass
    // that is largest for the whole box, so the sup is sup|R| / R(1) * |B|.
    const RadialSweep sw = radial_sweep(psi, spec.n, spec.lambda, box.q[0].lo, box.q[0].hi, opts);
    const double vol = box_volume(box, spec);
    return {sw.sup_fine / sw.weight_mass * vol, sw.sup_coarse / sw.weight_mass * vol};
  }
  const Integrand f = [&psi](const CartesianPoint& x) { return psi(x); };
  const PrefixGrid grid = prefix_integrals(f, box, spec, opts.cells_per_axis, opts.grid);
  PsiHat out;
  const int n = spec.n;
  const int cells = grid.cells;
  std::array<int, kMaxDim> idx{};
  for (std::size_t flat = 0; flat < grid.values.size(); ++flat) {
    const double mod = std::abs(grid.values[flat]);
    if (!std::isfinite(mod)) throw NumericalError("psi_hat: non-finite prefix integral");
    out.value = std::max(out.value, mod);
    // Corners of the half-resolution grid sit at odd oriented indices.
    bool coarse = true;
    for (int a = 0; a < n; ++a) {
      if (cells > 1 && idx[a] % 2 == 0) coarse = false;
    }
    if (coarse) out.coarse = std::max(out.coarse, mod);
    for (int a = n - 1; a >= 0; --a) {
      if (++idx[a] < cells) break;
      idx[a] = 0;
    }
  }
  return out;
}

bool bounded_verdict(const std::vector<double>& sups) {
  if (sups.size() < 3) return false;
  const double a = sups[sups.size() - 3], b = sups[sups.size() - 2], c = sups.back();
  if (a >= b && b >= c) return true;
  const double hi = std::max({a, b, c});
  const double lo = std::min({a, b, c});
  return lo > 0.0 && hi <= 1.10 * lo;
}

bool vanishing_verdict(const std::vector<double>& sups) {
  if (sups.size() < 4) return false;
  return sups.back() < 0.5 * sups[sups.size() - 4];
}

std::vector<double> CarlesonReport::trend_ratios() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < per_generation_sup.size(); ++i) {
    const double prev = per_generation_sup[i - 1].second;
    out.push_back(prev > 0.0 ? per_generation_sup[i].second / prev : 0.0);
  }
  return out;
}

namespace {

void finish_report(CarlesonReport& rep) {
  std::vector<double> fine, coarse;
  for (const auto& [m, v] : rep.per_generation_sup) fine.push_back(v);
  for (const auto& [m, v] : rep.per_generation_sup_coarse) coarse.push_back(v);
  rep.c_psi_estimate = fine.empty() ? 0.0 : *std::max_element(fine.begin(), fine.end());
  const double c_coarse = coarse.empty() ? 0.0 : *std::max_element(coarse.begin(), coarse.end());
  rep.grid_convergence = {c_coarse, rep.c_psi_estimate};
  rep.bounded_certificate = bounded_verdict(fine);
  rep.vanishing_certificate = vanishing_verdict(fine);
}

}  // namespace

CarlesonReport carleson_report(const Symbol& psi, const MeasureSpec& spec, int max_gen, const CarlesonOptions& opts) {
  if (max_gen < 0 || max_gen > 16) throw std::invalid_argument("carleson_report: max_gen outside [0, 16]");
  CarlesonReport rep;
  rep.n = spec.n;
  rep.lambda = spec.lambda;
  rep.max_gen = max_gen;
  rep.radial_path = opts.radial_fast_path && psi.is_radial();

  for (int m = 0; m <= max_gen; ++m) {
    const bool keep_rows = generation_size(spec.n, m) <= opts.per_box_limit;
    if (!keep_rows) rep.omitted_generations.push_back(m);
    if (rep.radial_path) {
      // Every box of a generation shares the same ratio.
      const RadialSweep sw = radial_sweep(psi, spec.n, spec.lambda, 1.0 - std::ldexp(1.0, -m),
                                          1.0 - std::ldexp(1.0, -m - 1), opts);
      const double ratio = sw.sup_fine / sw.weight_mass;
      rep.per_generation_sup.emplace_back(m, ratio);
      rep.per_generation_sup_coarse.emplace_back(m, sw.sup_coarse / sw.weight_mass);
      if (keep_rows) {
        for_each_box_id(spec.n, m, [&](const BoxId& id) {
          const double vol = box_volume(id, spec);
          rep.per_box.push_back({id, ratio * vol, vol, ratio});
        });
      }
      continue;
    }
    const std::vector<BoxId> ids = enumerate_generation(spec.n, m);
    std::vector<CarlesonRow> rows(ids.size());
    std::vector<double> coarse(ids.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&] {
      for (std::size_t i = next++; i < ids.size(); i = next++) {
        try {
          const PsiHat ph = psi_hat(psi, ids[i], spec, opts);
          const double vol = box_volume(ids[i], spec);
          rows[i] = {ids[i], ph.value, vol, ph.value / vol};
          coarse[i] = ph.coarse / vol;
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next = ids.size();
        }
      }
    };
    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, ids.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    double sup = 0.0, sup_coarse = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      sup = std::max(sup, rows[i].ratio);
      sup_coarse = std::max(sup_coarse, coarse[i]);
    }
    rep.per_generation_sup.emplace_back(m, sup);
    rep.per_generation_sup_coarse.emplace_back(m, sup_coarse);
    if (keep_rows) rep.per_box.insert(rep.per_box.end(), rows.begin(), rows.end());
  }
  finish_report(rep);
  return rep;
}

nlohmann::json CarlesonReport::to_json() const {
  nlohmann::json boxes = nlohmann::json::array();
  for (const auto& row : per_box) {
    boxes.push_back({{"id", row.id.to_string()},
                     {"generation", row.id.generation},
                     {"psi_hat", row.psi_hat},
                     {"volume_lambda", row.volume},
                     {"ratio", row.ratio}});
  }
  nlohmann::json sups = nlohmann::json::array();
  for (const auto& [m, v] : per_generation_sup) sups.push_back({m, v});
  nlohmann::json trend = nlohmann::json::array();
  const auto ratios = trend_ratios();
  for (std::size_t i = 0; i < ratios.size(); ++i) trend.push_back({per_generation_sup[i + 1].first, ratios[i]});
  return {{"lambda", lambda},
          {"n", n},
          {"max_gen", max_gen},
          {"radial_path", radial_path},
          {"boxes", boxes},
          {"omitted_generations", omitted_generations},
          {"per_generation_sup", sups},
          {"vanishing_trend", trend},
          {"c_psi_estimate", c_psi_estimate},
          {"bounded_certificate", bounded_certificate},
          {"vanishing_certificate", vanishing_certificate},
          {"certificate_note", "evidence at m <= max_gen, not a proof"},
          {"grid_convergence", {grid_convergence.first, grid_convergence.second}}};
}

std::string CarlesonReport::to_csv() const {
  std::ostringstream os;
  os << "id,generation,psi_hat,volume_lambda,ratio\n";
  char buf[128];
  for (const auto& row : per_box) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", row.psi_hat, row.volume, row.ratio);
    os << '"' << row.id.to_string() << "\"," << row.id.generation << ',' << buf << '\n';
  }
  return os.str();
}

namespace {

CoordBox full_box(int n) {
  CoordBox box{n, {}, 0};
  box.q[0] = {0.0, 1.0};
  for (int a = 1; a < n - 1; ++a) box.q[a] = {0.0, std::numbers::pi};
  box.q[n - 1] = {0.0, 2.0 * std::numbers::pi};
  return box;
}

Complex ball_average(const Integrand& g, const CartesianPoint& x, double r, const QuadratureGrid& grid) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("classical_average: r must lie in (0, 1)");
  const double nx = x.norm();
  if (!(nx < 1.0)) throw DomainError("classical_average: x must lie in the open ball");
  const int n = x.dim();
  const double rho = r * (1.0 - nx);
  // dV is normalized, so the integral over the unit ball is the average.
  const Integrand shifted = [&](const CartesianPoint& z) { return g(x + rho * z); };
  QuadratureGrid flat = grid;
  flat.angular_taper = 0;
  return integrate_box(shifted, full_box(n), MeasureSpec::make(n, 0.0), flat).value;
}

}  // namespace

Complex classical_average(const Symbol& psi, const CartesianPoint& x, double r, const QuadratureGrid& grid) {
  return ball_average([&psi](const CartesianPoint& y) { return psi(y); }, x, r, grid);
}

double classical_average_abs(const Symbol& psi, const CartesianPoint& x, double r, const QuadratureGrid& grid) {
  return ball_average([&psi](const CartesianPoint& y) { return Complex(std::abs(psi(y))); }, x, r, grid).real();
}

}  // namespace hbergman
