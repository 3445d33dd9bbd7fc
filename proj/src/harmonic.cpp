#include "hbergman/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "hbergman/special.hpp"

namespace hbergman {

namespace {

constexpr double kPi = std::numbers::pi;

double log_coefficient(int n, double lambda, int k) {
  const double h = 0.5 * n;
  return std::lgamma(k + h + lambda + 1) - std::lgamma(k + h) + std::lgamma(h) - std::lgamma(h + lambda + 1);
}

double log_dimension(int n, int k) {
  if (k == 0) return 0.0;
  if (n == 2) return std::log(2.0);
  // (2k+n-2)/(k+n-2) * binom(k+n-2, k)
  return std::log((2.0 * k + n - 2) / (k + n - 2)) + std::lgamma(k + n - 1.0) - std::lgamma(k + 1.0) -
         std::lgamma(n - 1.0);
}

double cosine_between(const CartesianPoint& x, const CartesianPoint& y, double nx, double ny) {
  return std::clamp(x.dot(y) / (nx * ny), -1.0, 1.0);
}

// sum_{k<=K} coeff(k) Z_k at product t and cosine c.
double kernel_series(int n, double lambda, int K, double t, double c) {
  const double h = 0.5 * n;
  double coeff = 1.0;
  double sum = 1.0;
  if (n == 2) {
    double e0 = 1.0, e1 = c * t;
    for (int k = 1; k <= K; ++k) {
      coeff *= (k - 1 + h + lambda + 1) / (k - 1 + h);
      sum += coeff * 2.0 * e1;
      const double e2 = 2.0 * c * t * e1 - t * t * e0;
      e0 = e1;
      e1 = e2;
    }
    return sum;
  }
  const double alpha = h - 1.0;
  double d0 = 1.0, d1 = 2.0 * alpha * c * t;
  for (int k = 1; k <= K; ++k) {
    coeff *= (k - 1 + h + lambda + 1) / (k - 1 + h);
    sum += coeff * (k + alpha) / alpha * d1;
    const double d2 = (2.0 * (k + alpha) * c * t * d1 - (k + 2.0 * alpha - 1.0) * t * t * d0) / (k + 1);
    d0 = d1;
    d1 = d2;
  }
  return sum;
}

}  // namespace

void KernelConfig::validate() const {
  if (!(lambda > -1.0)) throw std::invalid_argument("kernel: lambda must exceed -1");
  if (truncation_degree < 0) throw std::invalid_argument("kernel: truncation degree must be >= 0");
  if (!(tail_tol > 0.0)) throw std::invalid_argument("kernel: tail_tol must be positive");
  if (max_gen < 0 || max_gen > 16) throw std::invalid_argument("kernel: max_gen outside [0, 16]");
  if (tail_radial_nodes < 1 || tail_angular_nodes < 2) throw std::invalid_argument("kernel: tail rule too small");
  grid.validate();
}

double harmonic_dimension(int n, int k) {
  if (n < 2) throw DimensionError("harmonic_dimension: n must be >= 2");
  if (k < 0) return 0.0;
  return std::round(std::exp(log_dimension(n, k)));
}

double kernel_coefficient(int n, double lambda, int k) { return std::exp(log_coefficient(n, lambda, k)); }

double zonal(int k, const CartesianPoint& x, const CartesianPoint& y) {
  if (x.dim() != y.dim()) throw DimensionError("zonal: dimension mismatch");
  if (k < 0) throw std::invalid_argument("zonal: negative degree");
  const int n = x.dim();
  const double nx = x.norm(), ny = y.norm();
  if (nx > 1.0 + 1e-12 || ny > 1.0 + 1e-12) throw DomainError("zonal: arguments must lie in the closed ball");
  if (k == 0) return 1.0;
  if (nx == 0.0 || ny == 0.0) return 0.0;
  const double t = nx * ny;
  const double c = cosine_between(x, y, nx, ny);
  if (n == 2) {
    double e0 = 1.0, e1 = c * t;
    for (int j = 1; j < k; ++j) {
      const double e2 = 2.0 * c * t * e1 - t * t * e0;
      e0 = e1;
      e1 = e2;
    }
    return 2.0 * e1;
  }
  const double alpha = 0.5 * n - 1.0;
  double d0 = 1.0, d1 = 2.0 * alpha * c * t;
  for (int j = 1; j < k; ++j) {
    const double d2 = (2.0 * (j + alpha) * c * t * d1 - (j + 2.0 * alpha - 1.0) * t * t * d0) / (j + 1);
    d0 = d1;
    d1 = d2;
  }
  return (k + alpha) / alpha * d1;
}

namespace {

// log(coeff(k) dim_k) for k = 0..kMaxDegree+2, one table per (n, lambda).
const std::vector<double>& log_term_table(int n, double lambda) {
  thread_local int last_n = 0;
  thread_local double last_lambda = 0.0;
  thread_local const std::vector<double>* last = nullptr;
  if (last && last_n == n && last_lambda == lambda) return *last;
  static std::mutex mu;
  static std::map<std::pair<int, double>, std::vector<double>> tables;
  std::lock_guard lock(mu);
  auto& t = tables[{n, lambda}];
  if (t.empty()) {
    t.resize(KernelConfig::kMaxDegree + 3);
    for (int k = 0; k < static_cast<int>(t.size()); ++k) t[static_cast<std::size_t>(k)] = log_coefficient(n, lambda, k) + log_dimension(n, k);
  }
  last_n = n;
  last_lambda = lambda;
  last = &t;
  return t;
}

}  // namespace

std::pair<int, double> kernel_degree(int n, double t, const KernelConfig& cfg) {
  if (t > KernelConfig::kMaxProduct) throw DomainError("reproducing kernel refused: |x||y| exceeds 0.98");
  if (t <= 0.0) return {cfg.truncation_degree, 0.0};
  const double lt = std::log(t);
  const std::vector<double>& table = log_term_table(n, cfg.lambda);
  auto log_a = [&](int k) { return table[static_cast<std::size_t>(k)]; };
  // a_{k+1}/a_k decreases in k, so the tail after K is dominated by a
  // geometric series with ratio q = t a_{K+2}/a_{K+1}.
  for (int K = cfg.truncation_degree; K <= KernelConfig::kMaxDegree; K += 10) {
    const double la1 = log_a(K + 1);
    const double q = std::exp(lt + log_a(K + 2) - la1);
    if (q >= 1.0) continue;
    const double bound = std::exp(la1 + (K + 1) * lt) / (1.0 - q);
    if (bound < cfg.tail_tol) return {K, bound};
  }
  throw NumericalError("reproducing kernel: truncation degree limit reached before the tail tolerance");
}

KernelValue reproducing_kernel_ex(const CartesianPoint& x, const CartesianPoint& y, const KernelConfig& cfg) {
  if (x.dim() != y.dim()) throw DimensionError("reproducing_kernel: dimension mismatch");
  const int n = x.dim();
  const double nx = x.norm(), ny = y.norm();
  const double t = nx * ny;
  const auto [K, bound] = kernel_degree(n, t, cfg);
  if (t == 0.0) return {1.0, K, 0.0};
  return {kernel_series(n, cfg.lambda, K, t, cosine_between(x, y, nx, ny)), K, bound};
}

double reproducing_kernel(const CartesianPoint& x, const CartesianPoint& y, const KernelConfig& cfg) {
  return reproducing_kernel_ex(x, y, cfg).value;
}

namespace {

bool has_breaks(const Symbol& psi) {
  return psi.for_each_radial_break(0.5, 0.5, [](double) {});
}

QuadratureGrid with_radial_nodes(QuadratureGrid g, int radial) {
  if (g.nodes_per_axis.size() == 1) g.nodes_per_axis.push_back(g.nodes_per_axis[0]);
  g.nodes_per_axis[0] = radial;
  return g;
}

}  // namespace

bool tail_shell_used(const KernelConfig& cfg, const Symbol* psi) {
  if (!cfg.include_tail_shell) return false;
  if (!psi) return true;
  const double r_m = 1.0 - std::ldexp(1.0, -cfg.max_gen - 1);
  return !has_breaks(*psi) && psi->support_radius().value_or(1.0) > r_m;
}

void for_each_ball_node(int n, const KernelConfig& cfg, const Symbol* psi,
                        const std::function<void(const CartesianPoint&, double, int)>& visit) {
  cfg.validate();
  const MeasureSpec spec = MeasureSpec::make(n, cfg.lambda);
  const double rho = psi ? psi->support_radius().value_or(1.0) : 1.0;
  const bool oscillating = psi && has_breaks(*psi);
  const QuadratureGrid panel_grid = with_radial_nodes(cfg.grid, cfg.oscillation_nodes);
  for (int m = 0; m <= cfg.max_gen; ++m) {
    for_each_box_id(n, m, [&](const BoxId& id) {
      CoordBox box{n, box_intervals(id), m};
      if (box.q[0].lo >= rho) return;
      box.q[0].hi = std::min(box.q[0].hi, rho);
      auto emit = [&](const CartesianPoint& y, const double*, double w) { visit(y, w, m); };
      if (!oscillating) {
        for_each_node(box, spec, cfg.grid, emit);
        return;
      }
      const double r_lo = box.q[0].lo, r_hi = box.q[0].hi;
      double r_prev = r_lo;
      auto panel = [&](double r_next) {
        if (!(r_next > r_prev)) return;
        CoordBox piece = box;
        piece.q[0] = {r_prev, r_next};
        for_each_node(piece, spec, panel_grid, emit);
        r_prev = r_next;
      };
      psi->for_each_radial_break(r_lo, r_hi, [&](double s) { panel(std::min(1.0 - s, r_hi)); });
      panel(r_hi);
    });
  }
  if (!tail_shell_used(cfg, psi)) return;
  const double r_m = 1.0 - std::ldexp(1.0, -cfg.max_gen - 1);

  // Radial nodes with the part of the density that is smooth in r.
  std::vector<double> radii, rweights;
  const double inv_vol = 1.0 / unit_ball_volume(n);
  if (rho < 1.0) {
    const auto& gl = gauss_legendre(cfg.tail_radial_nodes);
    const double half = 0.5 * (rho - r_m), mid = 0.5 * (rho + r_m);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double r = mid + half * gl.nodes[i];
      radii.push_back(r);
      rweights.push_back(half * gl.weights[i] * spec.c_norm * std::pow(1 - r * r, cfg.lambda) * inv_vol);
    }
  } else {
    // u = 1 - r in [0, delta]; (1-r^2)^lambda = u^lambda (2-u)^lambda.
    const double delta = 1.0 - r_m;
    const QuadratureRule1D gj = gauss_jacobi(cfg.tail_radial_nodes, 0.0, cfg.lambda);
    const double scale = std::pow(0.5 * delta, cfg.lambda + 1.0);
    for (std::size_t i = 0; i < gj.nodes.size(); ++i) {
      const double u = 0.5 * delta * (1.0 + gj.nodes[i]);
      radii.push_back(1.0 - u);
      rweights.push_back(scale * gj.weights[i] * spec.c_norm * std::pow(2.0 - u, cfg.lambda) * inv_vol);
    }
  }
  const auto& polar = gauss_legendre(cfg.tail_angular_nodes);
  const int n_az = 2 * cfg.tail_angular_nodes;
  const int n_polar = n - 2;
  std::array<int, kMaxDim> idx{};
  std::array<double, kMaxDim> q{};
  CartesianPoint y(n);
  for (std::size_t ir = 0; ir < radii.size(); ++ir) {
    q[0] = radii[ir];
    // Odometer over the polar axes.
    idx.fill(0);
    while (true) {
      double wa = 1.0;
      for (int a = 1; a <= n_polar; ++a) {
        q[static_cast<std::size_t>(a)] = 0.5 * kPi * (1.0 + polar.nodes[static_cast<std::size_t>(idx[a])]);
        wa *= 0.5 * kPi * polar.weights[static_cast<std::size_t>(idx[a])];
      }
      for (int j = 0; j < n_az; ++j) {
        q[static_cast<std::size_t>(n - 1)] = 2.0 * kPi * j / n_az;
        to_cartesian_unchecked(n, q.data(), &y[0]);
        const double w = rweights[ir] * wa * (2.0 * kPi / n_az) * jacobian_unchecked(n, q.data());
        visit(y, w, -1);
      }
      int a = n_polar;
      for (; a >= 1; --a) {
        if (++idx[a] < cfg.tail_angular_nodes) break;
        idx[a] = 0;
      }
      if (a < 1) break;
    }
  }
}

const BallRule& BallRule::get(int n, const KernelConfig& cfg) {
  using Key = std::tuple<int, double, int, std::vector<int>, int, int, int, int, int, bool>;
  static std::mutex mu;
  static std::map<Key, std::unique_ptr<BallRule>> cache;
  const Key key{n,
                cfg.lambda,
                cfg.max_gen,
                cfg.grid.nodes_per_axis,
                cfg.grid.panels_per_axis,
                cfg.grid.angular_taper,
                cfg.grid.min_angular_nodes,
                cfg.tail_radial_nodes,
                cfg.tail_angular_nodes,
                cfg.include_tail_shell};
  std::lock_guard lock(mu);
  auto& slot = cache[key];
  if (!slot) {
    auto rule = std::make_unique<BallRule>();
    rule->n = n;
    for_each_ball_node(n, cfg, nullptr, [&](const CartesianPoint& y, double w, int m) {
      rule->nodes.push_back(y);
      rule->weights.push_back(w);
      rule->generation.push_back(m);
    });
    slot = std::move(rule);
  }
  return *slot;
}

namespace {

// Kernel values R(x, y_i) over a cached rule, remembered for the last x so
// that several functions can be projected at one point cheaply.
struct KernelRow {
  const BallRule* rule = nullptr;
  std::vector<double> x;
  double lambda = 0.0, tol = 0.0;
  int degree = 0;
  std::vector<double> values;
  double tail = 0.0;
};

const KernelRow& kernel_row(const BallRule& rule, const CartesianPoint& x, const KernelConfig& cfg) {
  thread_local KernelRow row;
  std::vector<double> xs(x.coords().begin(), x.coords().end());
  if (row.rule == &rule && row.x == xs && row.lambda == cfg.lambda && row.tol == cfg.tail_tol &&
      row.degree == cfg.truncation_degree) {
    return row;
  }
  row.rule = &rule;
  row.x = xs;
  row.lambda = cfg.lambda;
  row.tol = cfg.tail_tol;
  row.degree = cfg.truncation_degree;
  row.values.resize(rule.size());
  row.tail = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const KernelValue kv = reproducing_kernel_ex(x, rule.nodes[i], cfg);
    row.values[i] = kv.value;
    row.tail = std::max(row.tail, kv.tail_bound);
  }
  return row;
}

struct GenerationSums {
  std::vector<PairwiseAccumulator<Complex>> gens;
  PairwiseAccumulator<Complex> tail;
  explicit GenerationSums(int max_gen) : gens(static_cast<std::size_t>(max_gen + 1)) {}
  void add(int m, Complex v) {
    if (m < 0) {
      tail.add(v);
    } else {
      gens[static_cast<std::size_t>(m)].add(v);
    }
  }
  ProjectionResult finish(double kernel_tail, bool tail_included) const {
    ProjectionResult out;
    out.tail_shell_included = tail_included;
    PairwiseAccumulator<Complex> total;
    for (const auto& g : gens) {
      out.per_generation.push_back(g.total());
      total.add(out.per_generation.back());
    }
    out.tail_shell = tail.total();
    total.add(out.tail_shell);
    out.value = total.total();
    out.kernel_tail = kernel_tail;
    out.generations_used = static_cast<int>(gens.size()) - 1;
    const auto& s = out.per_generation;
    if (s.size() >= 3) {
      const double last = std::abs(s.back());
      out.decaying = last < std::abs(s[s.size() - 3]) || last <= 1e-15;
    }
    return out;
  }
};

}  // namespace

ProjectionResult project_ex(const Integrand& f, const CartesianPoint& x, const KernelConfig& cfg) {
  const BallRule& rule = BallRule::get(x.dim(), cfg);
  const KernelRow& row = kernel_row(rule, x, cfg);
  GenerationSums sums(cfg.max_gen);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    sums.add(rule.generation[i], rule.weights[i] * row.values[i] * f(rule.nodes[i]));
  }
  return sums.finish(row.tail, tail_shell_used(cfg, nullptr));
}

Complex project(const Integrand& f, const CartesianPoint& x, const KernelConfig& cfg) {
  return project_ex(f, x, cfg).value;
}

double maximal_project(const Integrand& f, const CartesianPoint& x, const KernelConfig& cfg) {
  const BallRule& rule = BallRule::get(x.dim(), cfg);
  const KernelRow& row = kernel_row(rule, x, cfg);
  PairwiseAccumulator<double> sum;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    sum.add(rule.weights[i] * std::abs(row.values[i]) * std::abs(f(rule.nodes[i])));
  }
  return sum.total();
}

ProjectionResult toeplitz_apply(const Symbol& psi, const Integrand& f, const CartesianPoint& x,
                                const KernelConfig& cfg) {
  GenerationSums sums(cfg.max_gen);
  double tail = 0.0;
  for_each_ball_node(x.dim(), cfg, &psi, [&](const CartesianPoint& y, double w, int m) {
    const Complex g = psi(y);
    if (g == Complex(0.0)) return;
    const KernelValue kv = reproducing_kernel_ex(x, y, cfg);
    tail = std::max(tail, kv.tail_bound);
    sums.add(m, w * kv.value * g * f(y));
  });
  return sums.finish(tail, tail_shell_used(cfg, &psi));
}

ProjectionResult toeplitz_truncated(const Symbol& psi, double rho, const Integrand& f, const CartesianPoint& x,
                                    const KernelConfig& cfg) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("toeplitz_truncated: rho must lie in (0, 1)");
  return toeplitz_apply(Symbol::truncated(psi, rho), f, x, cfg);
}

Polynomial Polynomial::constant(int dim, double c) {
  Polynomial p;
  p.dim = dim;
  p.terms.push_back({c, {}});
  return p;
}

Polynomial Polynomial::variable(int dim, int i) {
  Polynomial p;
  p.dim = dim;
  Term t{1.0, {}};
  t.exps[static_cast<std::size_t>(i)] = 1;
  p.terms.push_back(t);
  return p;
}

double Polynomial::operator()(const CartesianPoint& x) const {
  constexpr int kTable = 9;
  std::array<std::array<double, kTable>, kMaxDim> pw;
  for (int a = 0; a < dim; ++a) {
    auto& row = pw[static_cast<std::size_t>(a)];
    row[0] = 1.0;
    for (int e = 1; e < kTable; ++e) row[static_cast<std::size_t>(e)] = row[static_cast<std::size_t>(e - 1)] * x[a];
  }
  double s = 0.0;
  for (const auto& t : terms) {
    double v = t.coef;
    for (int a = 0; a < dim; ++a) {
      const int e = t.exps[static_cast<std::size_t>(a)];
      v *= e < kTable ? pw[static_cast<std::size_t>(a)][static_cast<std::size_t>(e)] : std::pow(x[a], e);
    }
    s += v;
  }
  return s;
}

Polynomial Polynomial::derivative(int i) const {
  Polynomial out;
  out.dim = dim;
  for (const auto& t : terms) {
    const int e = t.exps[static_cast<std::size_t>(i)];
    if (e == 0) continue;
    Term d = t;
    d.coef *= e;
    d.exps[static_cast<std::size_t>(i)] = e - 1;
    out.terms.push_back(d);
  }
  return out.simplified();
}

Polynomial Polynomial::laplacian() const {
  Polynomial out = Polynomial::constant(dim, 0.0);
  for (int a = 0; a < dim; ++a) out = out + derivative(a).derivative(a);
  return out.simplified();
}

Polynomial Polynomial::simplified() const {
  std::vector<Term> sorted = terms;
  std::sort(sorted.begin(), sorted.end(), [](const Term& a, const Term& b) { return a.exps < b.exps; });
  Polynomial out;
  out.dim = dim;
  for (const auto& t : sorted) {
    if (!out.terms.empty() && out.terms.back().exps == t.exps) {
      out.terms.back().coef += t.coef;
    } else {
      out.terms.push_back(t);
    }
  }
  std::erase_if(out.terms, [](const Term& t) { return t.coef == 0.0; });
  return out;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms) {
    int s = 0;
    for (int a = 0; a < dim; ++a) s += t.exps[static_cast<std::size_t>(a)];
    d = std::max(d, s);
  }
  return d;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial out = a;
  out.dim = std::max(a.dim, b.dim);
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  return out.simplified();
}

Polynomial operator*(double c, const Polynomial& a) {
  Polynomial out = a;
  for (auto& t : out.terms) t.coef *= c;
  return out.simplified();
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  out.dim = std::max(a.dim, b.dim);
  for (const auto& s : a.terms) {
    for (const auto& t : b.terms) {
      Polynomial::Term p{s.coef * t.coef, {}};
      for (std::size_t i = 0; i < kMaxDim; ++i) p.exps[i] = s.exps[i] + t.exps[i];
      out.terms.push_back(p);
    }
  }
  return out.simplified();
}

Integrand HarmonicBasisElement::as_integrand() const {
  Polynomial p = poly;
  return [p](const CartesianPoint& x) { return Complex(p(x)); };
}

namespace {

std::vector<HarmonicBasisElement> build_basis(int n) {
  std::vector<HarmonicBasisElement> out;
  auto add = [&](int degree, std::string label, Polynomial p) {
    const int index = static_cast<int>(std::count_if(out.begin(), out.end(), [&](const auto& e) { return e.degree == degree; }));
    out.push_back({degree, index, std::move(label), std::move(p)});
  };
  if (n == 2) {
    const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    add(0, "1", Polynomial::constant(2, 1.0));
    Polynomial re = Polynomial::constant(2, 1.0), im = Polynomial::constant(2, 0.0);
    for (int k = 1; k <= 4; ++k) {
      const Polynomial nre = re * x - im * y;
      const Polynomial nim = re * y + im * x;
      re = nre;
      im = nim;
      add(k, "Re(z^" + std::to_string(k) + ")", re);
      add(k, "Im(z^" + std::to_string(k) + ")", im);
    }
    return out;
  }
  if (n == 3) {
    const Polynomial x = Polynomial::variable(3, 0), y = Polynomial::variable(3, 1), z = Polynomial::variable(3, 2);
    const Polynomial one = Polynomial::constant(3, 1.0);
    const Polynomial r2 = x * x + y * y + z * z;
    const Polynomial x2y2 = x * x - y * y;
    add(0, "1", one);
    add(1, "x", x);
    add(1, "y", y);
    add(1, "z", z);
    add(2, "xy", x * y);
    add(2, "yz", y * z);
    add(2, "xz", x * z);
    add(2, "x^2-y^2", x2y2);
    add(2, "2z^2-x^2-y^2", 3.0 * z * z - r2);
    add(3, "x(x^2-3y^2)", x * (x * x - 3.0 * y * y));
    add(3, "y(3x^2-y^2)", y * (3.0 * x * x - y * y));
    add(3, "z(x^2-y^2)", z * x2y2);
    add(3, "xyz", x * y * z);
    add(3, "x(5z^2-r^2)", x * (5.0 * z * z - r2));
    add(3, "y(5z^2-r^2)", y * (5.0 * z * z - r2));
    add(3, "z(5z^2-3r^2)", z * (5.0 * z * z - 3.0 * r2));
    add(4, "xy(x^2-y^2)", x * y * x2y2);
    add(4, "x^4-6x^2y^2+y^4", x2y2 * x2y2 - 4.0 * x * x * y * y);
    add(4, "yz(3x^2-y^2)", y * z * (3.0 * x * x - y * y));
    add(4, "xz(x^2-3y^2)", x * z * (x * x - 3.0 * y * y));
    add(4, "xy(7z^2-r^2)", x * y * (7.0 * z * z - r2));
    add(4, "(x^2-y^2)(7z^2-r^2)", x2y2 * (7.0 * z * z - r2));
    add(4, "yz(7z^2-3r^2)", y * z * (7.0 * z * z - 3.0 * r2));
    add(4, "xz(7z^2-3r^2)", x * z * (7.0 * z * z - 3.0 * r2));
    add(4, "35z^4-30z^2r^2+3r^4", 35.0 * z * z * z * z - 30.0 * z * z * r2 + 3.0 * r2 * r2);
    return out;
  }
  throw DimensionError("harmonic_basis: tables exist for n = 2 and n = 3 only");
}

}  // namespace

const std::vector<HarmonicBasisElement>& harmonic_basis(int n) {
  static const std::vector<HarmonicBasisElement> b2 = build_basis(2);
  static const std::vector<HarmonicBasisElement> b3 = build_basis(3);
  if (n == 2) return b2;
  if (n == 3) return b3;
  throw DimensionError("harmonic_basis: tables exist for n = 2 and n = 3 only");
}

Complex matrix_element(const Symbol& psi, const HarmonicBasisElement& ei, const HarmonicBasisElement& ej,
                       const KernelConfig& cfg) {
  if (ei.poly.dim != ej.poly.dim) throw DimensionError("matrix_element: basis elements of different dimension");
  PairwiseAccumulator<Complex> sum;
  for_each_ball_node(ei.poly.dim, cfg, &psi, [&](const CartesianPoint& y, double w, int) {
    sum.add(w * psi(y) * ei(y) * ej(y));
  });
  return sum.total();
}

CartesianPoint to_point(Complex z) { return CartesianPoint{z.real(), z.imag()}; }

Complex to_complex(const CartesianPoint& x) {
  if (x.dim() != 2) throw DimensionError("to_complex: need a point of R^2");
  return {x[0], x[1]};
}

Complex disk_analytic_kernel(Complex z, Complex w, double lambda) {
  if (!(std::abs(z) < 1.0 && std::abs(w) < 1.0)) throw DomainError("disk kernel: arguments must lie in the open disk");
  if (!(lambda > -1.0)) throw std::invalid_argument("disk kernel: lambda must exceed -1");
  return std::pow(1.0 - z * std::conj(w), -(2.0 + lambda));
}

Complex analytic_project(const Integrand& g, Complex z, const KernelConfig& cfg) {
  const BallRule& rule = BallRule::get(2, cfg);
  PairwiseAccumulator<Complex> sum;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const CartesianPoint y = rule.nodes[i];
    sum.add(rule.weights[i] * g(y) * disk_analytic_kernel(z, to_complex(y), cfg.lambda));
  }
  return sum.total();
}

Complex toeplitz_analytic_apply(const Symbol& psi, const Integrand& f, Complex z, const KernelConfig& cfg) {
  PairwiseAccumulator<Complex> sum;
  for_each_ball_node(2, cfg, &psi, [&](const CartesianPoint& y, double w, int) {
    const Complex g = psi(y);
    if (g == Complex(0.0)) return;
    sum.add(w * g * f(y) * disk_analytic_kernel(z, to_complex(y), cfg.lambda));
  });
  return sum.total();
}

Complex cauchy_analytic_part(const std::function<Complex(Complex)>& h, Complex z, double radius, int points) {
  if (!(std::abs(z) < radius)) throw DomainError("cauchy_analytic_part: z must lie inside the circle");
  if (points < 4) throw std::invalid_argument("cauchy_analytic_part: need at least 4 points");
  PairwiseAccumulator<Complex> sum;
  for (int j = 0; j < points; ++j) {
    const Complex w = std::polar(radius, 2.0 * kPi * j / points);
    sum.add(h(w) * w / (w - z));
  }
  return sum.total() / static_cast<double>(points);
}

}  // namespace hbergman
