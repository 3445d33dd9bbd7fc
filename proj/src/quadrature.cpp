#include "hbergman/quadrature.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "hbergman/special.hpp"
#include "hbergman/spherical_map.hpp"

namespace hbergman {

namespace {

// One axis of a tensor rule: nodes, Gauss weights scaled to the interval, and
// the per-axis factor of the density.
struct AxisRule {
  std::vector<double> node;
  std::vector<double> weight;
  std::vector<double> c;
  std::vector<double> s;
};

void build_axis(const Interval& iv, int panels, int count, AxisRule& out) {
  const QuadratureRule1D& gl = gauss_legendre(count);
  out.node.clear();
  out.weight.clear();
  const double h = iv.width() / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = iv.lo + p * h;
    for (int i = 0; i < count; ++i) {
      out.node.push_back(lo + 0.5 * h * (gl.nodes[i] + 1.0));
      out.weight.push_back(0.5 * h * gl.weights[i]);
    }
  }
}

// Key of the last radial rule built into a slot; every box of a generation
// shares the radial interval, so rebuilding is skipped on a match.
struct RadialKey {
  double lo = -1.0;
  double hi = -1.0;
  int count = 0;
  int panels = 0;
  int n = 0;
  double lambda = 0.0;
  bool operator==(const RadialKey&) const = default;
};

struct RuleSet {
  std::array<AxisRule, kMaxDim> axis;
  RadialKey radial_key;
};

// Fills per-axis rules with the density factors folded into the weights:
// radial r^{n-1} (1-r^2)^lambda, polar sin^{n-1-j}, azimuth 1.
void build_rules(const CoordBox& box, const MeasureSpec& spec, const QuadratureGrid& grid, int panels,
                 RuleSet& rules) {
  const int n = box.dim;
  for (int a = 0; a < n; ++a) {
    AxisRule& rule = rules.axis[a];
    const int count = grid.nodes_on_axis(a, box.generation);
    if (a == 0) {
      const RadialKey key{box.q[0].lo, box.q[0].hi, count, panels, n, spec.lambda};
      if (key == rules.radial_key) continue;
      rules.radial_key = key;
    }
    build_axis(box.q[a], panels, count, rule);
    const std::size_t len = rule.node.size();
    rule.c.resize(len);
    rule.s.resize(len);
    for (std::size_t i = 0; i < len; ++i) {
      const double t = rule.node[i];
      if (a == 0) {
        const double w = (1.0 - t) * (1.0 + t);
        double tp = 1.0;
        for (int e = 0; e < n - 1; ++e) tp *= t;
        rule.weight[i] *= tp * (spec.lambda == 0.0 ? 1.0 : std::pow(w, spec.lambda));
      } else {
        rule.c[i] = std::cos(t);
        rule.s[i] = std::sin(t);
        const double sa = std::abs(rule.s[i]);
        for (int e = 0; e < n - 1 - a && a < n - 1; ++e) rule.weight[i] *= sa;
      }
    }
  }
}

double inverse_ball_volume(int n) {
  static const std::array<double, kMaxDim + 1> table = [] {
    std::array<double, kMaxDim + 1> t{};
    for (int k = 1; k <= kMaxDim; ++k) t[k] = 1.0 / unit_ball_volume(k);
    return t;
  }();
  return table[n];
}

// Calls visit(x, q, weight) for every node. Angular combinations are the
// outer loop so the Cartesian direction is built once per radial sweep.
template <class Visit>
void sweep(const CoordBox& box, const MeasureSpec& spec, const std::array<AxisRule, kMaxDim>& rules,
           Visit&& visit) {
  const int n = box.dim;
  const double pre = spec.c_norm * inverse_ball_volume(n);
  std::array<std::size_t, kMaxDim> idx{};
  std::array<double, kMaxDim> dir{};
  std::array<double, kMaxDim> q{};
  CartesianPoint x(n);
  const AxisRule& radial = rules[0];
  while (true) {
    double wang = pre;
    double prod = 1.0;
    for (int a = 1; a < n; ++a) {
      const std::size_t i = idx[a];
      q[a] = rules[a].node[i];
      wang *= rules[a].weight[i];
      dir[a - 1] = prod * rules[a].c[i];
      prod *= rules[a].s[i];
    }
    dir[n - 1] = prod;
    for (std::size_t k = 0; k < radial.node.size(); ++k) {
      const double r = radial.node[k];
      q[0] = r;
      for (int i = 0; i < n; ++i) x[i] = r * dir[i];
      visit(x, q.data(), wang * radial.weight[k]);
    }
    int a = n - 1;
    while (a >= 1) {
      if (++idx[a] < rules[a].node.size()) break;
      idx[a] = 0;
      --a;
    }
    if (a < 1) return;
  }
}

Complex box_sum(const Integrand& f, const CoordBox& box, const MeasureSpec& spec,
                const QuadratureGrid& grid, int panels) {
  // Scratch rules per nesting depth; integrands may themselves integrate.
  thread_local std::vector<std::unique_ptr<RuleSet>> pool;
  thread_local std::size_t depth = 0;
  if (pool.size() <= depth) pool.push_back(std::make_unique<RuleSet>());
  RuleSet& rules = *pool[depth];
  build_rules(box, spec, grid, panels, rules);
  struct DepthGuard {
    std::size_t& d;
    explicit DepthGuard(std::size_t& v) : d(v) { ++d; }
    ~DepthGuard() { --d; }
  } guard(depth);
  Complex acc{};
  bool finite = true;
  sweep(box, spec, rules.axis, [&](const CartesianPoint& x, const double*, double w) {
    const Complex v = f(x);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) finite = false;
    acc += w * v;
  });
  if (!finite) throw NumericalError("integrand returned a non-finite value");
  return acc;
}

double radial_moment(int n, double lambda, const Interval& iv) {
  const QuadratureRule1D& gl = gauss_legendre(40);
  double acc = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const double r = iv.mid() + 0.5 * iv.width() * gl.nodes[i];
    acc += gl.weights[i] * std::pow(r, n - 1) * std::pow((1.0 - r) * (1.0 + r), lambda);
  }
  return 0.5 * iv.width() * acc;
}

double sine_moment(int power, const Interval& iv) {
  if (power == 0) return iv.width();
  const QuadratureRule1D& gl = gauss_legendre(24);
  double acc = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const double t = iv.mid() + 0.5 * iv.width() * gl.nodes[i];
    acc += gl.weights[i] * std::pow(std::abs(std::sin(t)), power);
  }
  return 0.5 * iv.width() * acc;
}

double volume_of(int n, const std::array<Interval, kMaxDim>& q, const MeasureSpec& spec) {
  double v = spec.c_norm / unit_ball_volume(n) * radial_moment(n, spec.lambda, q[0]);
  for (int a = 1; a < n; ++a) v *= sine_moment(a < n - 1 ? n - 1 - a : 0, q[a]);
  return v;
}

}  // namespace

MeasureSpec MeasureSpec::make(int n, double lambda) {
  if (n < 2 || n > kMaxDim) throw DimensionError("measure: dimension outside [2, 8]");
  MeasureSpec spec;
  spec.n = n;
  spec.lambda = lambda;
  spec.c_norm = normalization_constant(n, lambda);
  return spec;
}

NormSpec NormSpec::make(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("norm: p must lie in (1, inf)");
  return NormSpec{p, p / (p - 1.0)};
}

int QuadratureGrid::nodes_on_axis(int axis, int generation) const {
  const int base = nodes_per_axis.empty()
                       ? 8
                       : nodes_per_axis[std::min<std::size_t>(axis, nodes_per_axis.size() - 1)];
  if (axis == 0 || angular_taper <= 0) return base;
  return std::max(std::min(base, min_angular_nodes), base - angular_taper * generation);
}

QuadratureGrid QuadratureGrid::refined() const {
  QuadratureGrid g = *this;
  g.panels_per_axis *= 2;
  return g;
}

void QuadratureGrid::validate() const {
  if (nodes_per_axis.empty()) throw std::invalid_argument("grid: nodes_per_axis is empty");
  for (int c : nodes_per_axis) {
    if (c < 2 || c > 128) throw std::invalid_argument("grid: node counts must lie in [2, 128]");
  }
  if (panels_per_axis < 1) throw std::invalid_argument("grid: panels_per_axis must be >= 1");
  if (refinement_level < 0 || refinement_level > 4) {
    throw std::invalid_argument("grid: refinement_level must lie in [0, 4]");
  }
  if (angular_taper < 0 || min_angular_nodes < 2) throw std::invalid_argument("grid: bad taper");
}

CoordBox coord_box(const DyadicBox& box) { return CoordBox{box.dim(), box.q, box.id.generation}; }

double normalization_constant(int n, double lambda) {
  if (!(lambda > -1.0)) throw std::domain_error("c(n, lambda): lambda must exceed -1");
  if (n < 1) throw DimensionError("c(n, lambda): bad dimension");
  const double h = 0.5 * n;
  return 2.0 / n *
         std::exp(std::lgamma(h + lambda + 1.0) - std::lgamma(h) - std::lgamma(lambda + 1.0));
}

double measure_density(const MeasureSpec& spec, const double* q) {
  const int n = spec.n;
  const double r = q[0];
  const double w = (1.0 - r) * (1.0 + r);
  return spec.c_norm / unit_ball_volume(n) * jacobian_unchecked(n, q) *
         (spec.lambda == 0.0 ? 1.0 : std::pow(w, spec.lambda));
}

void for_each_node(const CoordBox& box, const MeasureSpec& spec, const QuadratureGrid& grid,
                   const std::function<void(const CartesianPoint&, const double*, double)>& visit) {
  RuleSet rules;
  build_rules(box, spec, grid, grid.panels_per_axis, rules);
  sweep(box, spec, rules.axis, visit);
}

IntegralEstimate integrate_box(const Integrand& f, const CoordBox& box, const MeasureSpec& spec,
                               const QuadratureGrid& grid) {
  if (box.dim != spec.n) throw DimensionError("integrate_box: box and measure dimensions differ");
  const int fine = grid.panels_per_axis << grid.refinement_level;
  IntegralEstimate out;
  out.value = box_sum(f, box, spec, grid, fine);
  if (grid.refinement_level > 0) {
    const Complex coarse = box_sum(f, box, spec, grid, fine / 2);
    out.error = std::abs(out.value - coarse);
  }
  return out;
}

double box_volume(const BoxId& id, const MeasureSpec& spec) {
  validate_box_id(id);
  if (id.dim != spec.n) throw DimensionError("box_volume: dimension mismatch");
  return volume_of(id.dim, box_intervals(id), spec);
}

double box_volume(const DyadicBox& box, const MeasureSpec& spec) {
  if (box.dim() != spec.n) throw DimensionError("box_volume: dimension mismatch");
  return volume_of(box.dim(), box.q, spec);
}

const Complex& PrefixGrid::at(const std::array<int, kMaxDim>& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim; ++a) flat = flat * cells + idx[a];
  return values.at(flat);
}

PrefixGrid prefix_integrals(const Integrand& f, const DyadicBox& box, const MeasureSpec& spec,
                            int cells_per_axis, const QuadratureGrid& grid) {
  const int n = box.dim();
  if (n != spec.n) throw DimensionError("prefix_integrals: dimension mismatch");
  if (cells_per_axis < 1) throw std::invalid_argument("prefix_integrals: need at least one cell");
  PrefixGrid out;
  out.dim = n;
  out.cells = cells_per_axis;
  std::size_t total = 1;
  for (int a = 0; a < n; ++a) total *= cells_per_axis;
  out.values.assign(total, Complex{});

  // Cell integrals in oriented index order (index 0 touches x^(j)).
  std::array<int, kMaxDim> idx{};
  for (std::size_t flat = 0; flat < total; ++flat) {
    CoordBox cell{n, {}, box.id.generation};
    for (int a = 0; a < n; ++a) {
      const double h = box.q[a].width() / cells_per_axis;
      const int k = box.orientation[a] > 0 ? idx[a] : cells_per_axis - 1 - idx[a];
      cell.q[a] = {box.q[a].lo + k * h, box.q[a].lo + (k + 1) * h};
    }
    out.values[flat] = box_sum(f, cell, spec, grid, 1);
    for (int a = n - 1; a >= 0; --a) {
      if (++idx[a] < cells_per_axis) break;
      idx[a] = 0;
    }
  }
  // Running sums along each axis turn cell values into anchored box integrals.
  std::size_t stride = 1;
  for (int a = n - 1; a >= 0; --a) {
    const std::size_t span = stride * cells_per_axis;
    for (std::size_t base = 0; base < total; base += span) {
      for (std::size_t off = 0; off < stride; ++off) {
        for (int k = 1; k < cells_per_axis; ++k) {
          out.values[base + off + k * stride] += out.values[base + off + (k - 1) * stride];
        }
      }
    }
    stride = span;
  }
  return out;
}

IntegralEstimate integrate_ball(const Integrand& f, const MeasureSpec& spec, int max_gen,
                                const QuadratureGrid& grid) {
  grid.validate();
  if (max_gen < 0 || max_gen > 16) throw std::invalid_argument("integrate_ball: max_gen outside [0, 16]");
  const int n = spec.n;
  const int fine = grid.panels_per_axis << grid.refinement_level;
  PairwiseAccumulator<Complex> fine_sum;
  PairwiseAccumulator<Complex> coarse_sum;
  for (int m = 0; m <= max_gen; ++m) {
    for_each_box_id(n, m, [&](const BoxId& id) {
      const CoordBox box{n, box_intervals(id), m};
      fine_sum.add(box_sum(f, box, spec, grid, fine));
      if (grid.refinement_level > 0) coarse_sum.add(box_sum(f, box, spec, grid, fine / 2));
    });
  }
  IntegralEstimate out;
  out.value = fine_sum.total();
  if (grid.refinement_level > 0) out.error = std::abs(out.value - coarse_sum.total());
  return out;
}

double norm_p(const Integrand& f, const NormSpec& norm, const MeasureSpec& spec, int max_gen,
              const QuadratureGrid& grid) {
  const double p = norm.p;
  const Integrand g = [&](const CartesianPoint& x) { return Complex(std::pow(std::abs(f(x)), p)); };
  return std::pow(integrate_ball(g, spec, max_gen, grid).value.real(), 1.0 / p);
}

double shell_mass(int n, double lambda, double a, double b) {
  if (!(lambda > -1.0)) throw std::domain_error("shell_mass: lambda must exceed -1");
  if (!(0.0 <= a && a <= b && b <= 1.0)) throw std::domain_error("shell_mass: need 0 <= a <= b <= 1");
  const double alpha = 0.5 * n;
  const double beta = lambda + 1.0;
  // Mass of a <= |x| <= b is I_{b^2} - I_{a^2}; take complements near 1 to keep digits.
  if (a * a > 0.5) {
    return boost::math::ibetac(alpha, beta, a * a) - boost::math::ibetac(alpha, beta, b * b);
  }
  return boost::math::ibeta(alpha, beta, b * b) - boost::math::ibeta(alpha, beta, a * a);
}

double outer_shell_mass(int n, double lambda, double a) {
  if (!(lambda > -1.0)) throw std::domain_error("shell_mass: lambda must exceed -1");
  if (!(0.0 <= a && a <= 1.0)) throw std::domain_error("shell_mass: need 0 <= a <= 1");
  return boost::math::ibetac(0.5 * n, lambda + 1.0, a * a);
}

Complex pairwise_sum(std::span<const Complex> values) {
  PairwiseAccumulator<Complex> acc;
  for (const Complex& v : values) acc.add(v);
  return acc.total();
}

double pairwise_sum(std::span<const double> values) {
  PairwiseAccumulator<double> acc;
  for (double v : values) acc.add(v);
  return acc.total();
}

}  // namespace hbergman
