#include "hbergman/symbols.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "hbergman/special.hpp"

namespace hbergman {

namespace {

using Complex = std::complex<double>;

// Cumulative g at x = 2^k for a custom profile, extended on demand.
struct GTable {
  std::mutex mu;
  std::vector<double> at_pow2{0.0};
};

struct GCache {
  std::mutex mu;
  std::map<std::pair<double, double>, std::shared_ptr<GTable>> tables;
};

double integrate_weighted(const Profile& f, double a, double lo, double hi) {
  if (hi <= lo) return 0.0;
  const QuadratureRule1D& gl = gauss_legendre(20);
  constexpr int kPanels = 4;
  const double h = (hi - lo) / kPanels;
  double acc = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double c = lo + (p + 0.5) * h;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double y = c + 0.5 * h * gl.nodes[i];
      acc += 0.5 * h * gl.weights[i] * f(y) * std::pow(y, a);
    }
  }
  return acc;
}

// Custom profiles are identified by their label.
GTable& custom_table(const Section6Params& p) {
  static std::mutex reg_mu;
  static std::map<std::string, std::shared_ptr<GCache>> by_label;
  std::shared_ptr<GCache> cache;
  {
    std::lock_guard lock(reg_mu);
    auto& named = by_label[p.profile.label];
    if (!named) named = std::make_shared<GCache>();
    cache = named;
  }
  std::lock_guard lock(cache->mu);
  auto& t = cache->tables[{p.lambda, p.g_weight_exponent()}];
  if (!t) t = std::make_shared<GTable>();
  return *t;
}

double custom_g_at_pow2(const Section6Params& p, GTable& t, std::size_t k) {
  std::lock_guard lock(t.mu);
  const double a = p.g_weight_exponent();
  while (t.at_pow2.size() <= k) {
    const std::size_t j = t.at_pow2.size() - 1;
    const double lo = std::ldexp(1.0, static_cast<int>(j));
    t.at_pow2.push_back(t.at_pow2.back() + integrate_weighted(p.profile, a, lo, 2.0 * lo));
  }
  return t.at_pow2[k];
}

// int_1^x y^a dy
double power_integral(double a, double x) {
  const double lx = std::log(x);
  if (a == -1.0) return lx;
  return std::expm1((a + 1.0) * lx) / (a + 1.0);
}

double power_integral_inverse(double a, double u) {
  if (a == -1.0) return std::exp(u);
  return std::exp(std::log1p((a + 1.0) * u) / (a + 1.0));
}

double phase_of(double g) {
  // exp(i pi g) depends on g mod 2 only; reducing first keeps the phase
  // accurate when g is large.
  return std::numbers::pi * std::fmod(g, 2.0);
}

}  // namespace

Profile Profile::constant(double c) {
  Profile p;
  p.type = ProfileType::Const;
  p.value = c;
  p.label = "const";
  return p;
}

Profile Profile::power(double s) {
  Profile p;
  p.type = ProfileType::Power;
  p.exponent = s;
  p.label = "power";
  return p;
}

Profile Profile::from_function(std::function<double(double)> f, std::string label) {
  Profile p;
  p.type = ProfileType::Custom;
  p.custom = std::move(f);
  p.label = std::move(label);
  return p;
}

double Profile::operator()(double x) const {
  switch (type) {
    case ProfileType::Const:
      return value;
    case ProfileType::Power:
      return std::pow(x, exponent);
    case ProfileType::Custom:
      return custom(x);
  }
  return 0.0;
}

double Section6Params::g_weight_exponent() const {
  return variant == Section6Variant::Bounded ? lambda - 1.0 : lambda;
}

void Section6Params::validate() const {
  if (!(lambda > -1.0)) throw std::invalid_argument("section6: lambda must exceed -1");
  if (n < 2 || n > kMaxDim) throw std::invalid_argument("section6: dimension outside [2, 8]");
  switch (profile.type) {
    case ProfileType::Const:
      if (!(profile.value > 0.0) || !std::isfinite(profile.value)) {
        throw std::invalid_argument("section6: constant profile must be positive");
      }
      // inf c x^lambda over x >= 1 is 0 when lambda < 0
      if (lambda < 0.0) throw std::invalid_argument("section6: inf f(x) x^lambda = 0 for a constant f with lambda < 0");
      break;
    case ProfileType::Power:
      if (!(profile.exponent >= 0.0) || !std::isfinite(profile.exponent)) {
        throw std::invalid_argument("section6: power profile needs exponent s >= 0");
      }
      if (profile.exponent + lambda < 0.0) {
        throw std::invalid_argument("section6: inf x^(s+lambda) = 0 when s + lambda < 0");
      }
      break;
    case ProfileType::Custom: {
      if (!profile.custom) throw std::invalid_argument("section6: empty custom profile");
      // Sampled check of the inf-condition on a geometric grid of [1, 2^40].
      double lo = INFINITY;
      for (int k = 0; k <= 160; ++k) {
        const double x = std::exp2(k * 0.25);
        const double v = profile(x) * std::pow(x, lambda);
        if (!std::isfinite(v)) throw std::invalid_argument("section6: custom profile not finite");
        lo = std::min(lo, v);
      }
      if (!(lo > 1e-300)) throw std::invalid_argument("section6: custom profile violates inf f(x) x^lambda > 0");
      break;
    }
  }
}

double g_of(const Section6Params& p, double x) {
  if (!(x >= 1.0)) throw std::domain_error("g: x must be >= 1");
  const double w = p.g_weight_exponent();
  switch (p.profile.type) {
    case ProfileType::Const:
      return p.profile.value * power_integral(w, x);
    case ProfileType::Power:
      return power_integral(w + p.profile.exponent, x);
    case ProfileType::Custom: {
      GTable& t = custom_table(p);
      const int k = std::max(0, std::ilogb(x));
      const double base = custom_g_at_pow2(p, t, static_cast<std::size_t>(k));
      return base + integrate_weighted(p.profile, w, std::ldexp(1.0, k), x);
    }
  }
  return 0.0;
}

double g_inverse(const Section6Params& p, double u) {
  if (!(u >= 0.0)) throw std::domain_error("g inverse: level must be >= 0");
  const double w = p.g_weight_exponent();
  switch (p.profile.type) {
    case ProfileType::Const:
      return power_integral_inverse(w, u / p.profile.value);
    case ProfileType::Power:
      return power_integral_inverse(w + p.profile.exponent, u);
    case ProfileType::Custom: {
      GTable& t = custom_table(p);
      std::size_t k = 0;
      while (custom_g_at_pow2(p, t, k + 1) < u) {
        if (++k > 1000) throw std::domain_error("g inverse: level beyond tabulated range");
      }
      double lo = std::ldexp(1.0, static_cast<int>(k));
      double hi = 2.0 * lo;
      for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g_of(p, mid) < u ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 1.0;
}

std::size_t for_each_g_level(const Section6Params& p, double x_lo, double x_hi, double step,
                             const std::function<void(double x)>& visit) {
  if (!(step > 0.0)) throw std::invalid_argument("g levels: step must be positive");
  if (x_hi < x_lo) return 0;
  const double g_lo = g_of(p, x_lo);
  const double g_hi = g_of(p, x_hi);
  const auto k_lo = static_cast<long long>(std::ceil(g_lo / step));
  const auto k_hi = static_cast<long long>(std::floor(g_hi / step));
  std::size_t count = 0;
  for (long long k = k_lo; k <= k_hi; ++k) {
    const double x = std::clamp(g_inverse(p, k * step), x_lo, x_hi);
    visit(x);
    ++count;
  }
  return count;
}

std::vector<double> oscillation_knots(const Section6Params& p, int m) {
  std::vector<double> out;
  const double x_lo = std::ldexp(1.0, m);
  const double x_hi = std::ldexp(1.0, m + 1);
  for_each_g_level(p, x_lo, x_hi, 1.0, [&](double x) { out.push_back(1.0 - 1.0 / x); });
  return out;
}

struct Symbol::Impl {
  SymbolKind kind = SymbolKind::Constant;
  Complex value{};
  std::function<Complex(double)> profile;
  std::function<Complex(const CartesianPoint&)> pointwise;
  std::string label;
  std::optional<ExprAST> expr;
  Section6Params s6;
  double rho = 1.0;
  BoxId box;
  std::shared_ptr<const Impl> inner;
};

Symbol Symbol::constant(Complex c) {
  auto impl = std::make_shared<Impl>();
  impl->kind = SymbolKind::Constant;
  impl->value = c;
  return Symbol(impl);
}

Symbol Symbol::radial(std::function<Complex(double)> profile, std::string label) {
  if (!profile) throw std::invalid_argument("radial symbol: empty profile");
  auto impl = std::make_shared<Impl>();
  impl->kind = SymbolKind::Radial;
  impl->profile = std::move(profile);
  impl->label = std::move(label);
  return Symbol(impl);
}

Symbol Symbol::expression(const ExprAST& ast) {
  auto impl = std::make_shared<Impl>();
  impl->kind = SymbolKind::Expression;
  impl->expr = ast;
  return Symbol(impl);
}

Symbol Symbol::function(std::function<Complex(const CartesianPoint&)> f, std::string label) {
  if (!f) throw std::invalid_argument("function symbol: empty callable");
  auto impl = std::make_shared<Impl>();
  impl->kind = SymbolKind::Function;
  impl->pointwise = std::move(f);
  impl->label = std::move(label);
  return Symbol(impl);
}

Symbol Symbol::section6(const Section6Params& params) {
  params.validate();
  auto impl = std::make_shared<Impl>();
  impl->kind = SymbolKind::Section6;
  impl->s6 = params;
  return Symbol(impl);
}

Symbol Symbol::truncated(const Symbol& inner, double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("truncated symbol: rho must lie in (0, 1]");
  auto impl = std::make_shared<Impl>();
  impl->kind = SymbolKind::Truncated;
  impl->rho = rho;
  impl->inner = inner.impl_;
  return Symbol(impl);
}

Symbol Symbol::box_restricted(const Symbol& inner, const BoxId& id) {
  validate_box_id(id);
  auto impl = std::make_shared<Impl>();
  impl->kind = SymbolKind::BoxRestricted;
  impl->box = id;
  impl->inner = inner.impl_;
  return Symbol(impl);
}

Symbol Symbol::scaled(const Symbol& inner, Complex factor) {
  auto impl = std::make_shared<Impl>();
  impl->kind = SymbolKind::Scaled;
  impl->value = factor;
  impl->inner = inner.impl_;
  return Symbol(impl);
}

Symbol Symbol::conjugate(const Symbol& inner) {
  auto impl = std::make_shared<Impl>();
  impl->kind = SymbolKind::Conjugate;
  impl->inner = inner.impl_;
  return Symbol(impl);
}

namespace {

Complex section6_value(const Section6Params& p, double r) {
  if (!(r > 0.0)) throw DomainError("section6 symbol is singular at the origin");
  if (!(r < 1.0)) throw DomainError("section6 symbol evaluated outside the open ball");
  const double s = 1.0 - r;
  const double x = 1.0 / s;
  const double g = g_of(p, x);
  const double mod = std::pow(r, 1 - p.n) * std::pow(s * (2.0 - s), -p.lambda) * p.profile(x);
  return std::polar(mod, phase_of(g));
}

bool impl_radial(const Symbol::Impl& s) {
  switch (s.kind) {
    case SymbolKind::Constant:
    case SymbolKind::Radial:
    case SymbolKind::Section6:
      return true;
    case SymbolKind::Expression:
      return s.expr->radial_only();
    case SymbolKind::Function:
    case SymbolKind::BoxRestricted:
      return false;
    case SymbolKind::Truncated:
    case SymbolKind::Scaled:
    case SymbolKind::Conjugate:
      return impl_radial(*s.inner);
  }
  return false;
}

Complex impl_radial_value(const Symbol::Impl& s, double r, int dim) {
  switch (s.kind) {
    case SymbolKind::Constant:
      return s.value;
    case SymbolKind::Radial:
      return s.profile(r);
    case SymbolKind::Expression: {
      CartesianPoint x(s.expr->dim());
      x[0] = r;
      return s.expr->evaluate(x);
    }
    case SymbolKind::Section6:
      return section6_value(s.s6, r);
    case SymbolKind::Truncated:
      return r <= s.rho ? impl_radial_value(*s.inner, r, dim) : Complex(0.0);
    case SymbolKind::Scaled:
      return s.value * impl_radial_value(*s.inner, r, dim);
    case SymbolKind::Conjugate:
      return std::conj(impl_radial_value(*s.inner, r, dim));
    case SymbolKind::Function:
    case SymbolKind::BoxRestricted:
      break;
  }
  throw std::logic_error("radial_value on a non-radial symbol");
}

Complex impl_eval(const Symbol::Impl& s, const CartesianPoint& x) {
  switch (s.kind) {
    case SymbolKind::Constant:
      return s.value;
    case SymbolKind::Radial:
      return s.profile(x.norm());
    case SymbolKind::Expression:
      return s.expr->evaluate(x);
    case SymbolKind::Function:
      return s.pointwise(x);
    case SymbolKind::Section6:
      if (x.dim() != s.s6.n) throw DimensionError("section6 symbol: point dimension differs from n");
      return section6_value(s.s6, x.norm());
    case SymbolKind::Truncated:
      return x.norm() <= s.rho ? impl_eval(*s.inner, x) : Complex(0.0);
    case SymbolKind::BoxRestricted:
      return locate(x) == s.box ? impl_eval(*s.inner, x) : Complex(0.0);
    case SymbolKind::Scaled:
      return s.value * impl_eval(*s.inner, x);
    case SymbolKind::Conjugate:
      return std::conj(impl_eval(*s.inner, x));
  }
  return 0.0;
}

Complex impl_weighted(const Symbol::Impl& s, double sc, int n, double lambda) {
  switch (s.kind) {
    case SymbolKind::Section6:
      if (s.s6.n == n && s.s6.lambda == lambda) {
        const double x = 1.0 / sc;
        return std::polar(s.s6.profile(x), phase_of(g_of(s.s6, x)));
      }
      break;
    case SymbolKind::Scaled:
      return s.value * impl_weighted(*s.inner, sc, n, lambda);
    case SymbolKind::Conjugate:
      return std::conj(impl_weighted(*s.inner, sc, n, lambda));
    case SymbolKind::Truncated:
      return 1.0 - sc <= s.rho ? impl_weighted(*s.inner, sc, n, lambda) : Complex(0.0);
    default:
      break;
  }
  const double r = 1.0 - sc;
  const double w = sc * (2.0 - sc);
  return std::pow(r, n - 1) * (lambda == 0.0 ? 1.0 : std::pow(w, lambda)) * impl_radial_value(s, r, n);
}

bool impl_breaks(const Symbol::Impl& s, double r_lo, double r_hi, const std::function<void(double)>& visit) {
  switch (s.kind) {
    case SymbolKind::Section6: {
      const double x_lo = 1.0 / (1.0 - r_lo);
      const double x_hi = 1.0 / (1.0 - r_hi);
      for_each_g_level(s.s6, x_lo, x_hi, 0.5, [&](double x) { visit(1.0 / x); });
      return true;
    }
    case SymbolKind::Truncated:
      if (r_lo >= s.rho) return impl_breaks(*s.inner, r_lo, r_lo, [](double) {});
      return impl_breaks(*s.inner, r_lo, std::min(r_hi, s.rho), visit);
    case SymbolKind::Scaled:
    case SymbolKind::Conjugate:
      return impl_breaks(*s.inner, r_lo, r_hi, visit);
    default:
      return false;
  }
}

std::string impl_describe(const Symbol::Impl& s) {
  std::ostringstream os;
  switch (s.kind) {
    case SymbolKind::Constant:
      os << "constant(" << s.value.real() << (s.value.imag() < 0 ? "" : "+") << s.value.imag() << "i)";
      break;
    case SymbolKind::Radial:
      os << "radial(" << s.label << ")";
      break;
    case SymbolKind::Function:
      os << "function(" << s.label << ")";
      break;
    case SymbolKind::Expression:
      os << "expression(" << s.expr->print() << ")";
      break;
    case SymbolKind::Section6:
      os << "section6(" << (s.s6.variant == Section6Variant::Bounded ? "bounded" : "compact") << ", f=";
      if (s.s6.profile.type == ProfileType::Const) {
        os << s.s6.profile.value;
      } else if (s.s6.profile.type == ProfileType::Power) {
        os << "x^" << s.s6.profile.exponent;
      } else {
        os << s.s6.profile.label;
      }
      os << ", lambda=" << s.s6.lambda << ", n=" << s.s6.n << ")";
      break;
    case SymbolKind::Truncated:
      os << "truncated(" << impl_describe(*s.inner) << ", rho=" << s.rho << ")";
      break;
    case SymbolKind::BoxRestricted:
      os << "box_restricted(" << impl_describe(*s.inner) << ", " << s.box.to_string() << ")";
      break;
    case SymbolKind::Scaled:
      os << "scaled(" << impl_describe(*s.inner) << ", " << s.value.real() << (s.value.imag() < 0 ? "" : "+")
         << s.value.imag() << "i)";
      break;
    case SymbolKind::Conjugate:
      os << "conjugate(" << impl_describe(*s.inner) << ")";
      break;
  }
  return os.str();
}

}  // namespace

Complex Symbol::operator()(const CartesianPoint& x) const { return impl_eval(*impl_, x); }

SymbolKind Symbol::kind() const { return impl_->kind; }

bool Symbol::is_radial() const { return impl_radial(*impl_); }

Complex Symbol::radial_value(double r) const {
  if (!is_radial()) throw std::logic_error("radial_value on a non-radial symbol");
  return impl_radial_value(*impl_, r, 0);
}

Complex Symbol::weighted_radial(double s, int n, double lambda) const {
  if (!is_radial()) throw std::logic_error("weighted_radial on a non-radial symbol");
  return impl_weighted(*impl_, s, n, lambda);
}

bool Symbol::for_each_radial_break(double r_lo, double r_hi, const std::function<void(double s)>& visit) const {
  return impl_breaks(*impl_, r_lo, r_hi, visit);
}

std::optional<double> Symbol::support_radius() const {
  std::optional<double> rho;
  for (const Impl* s = impl_.get(); s; s = s->inner.get()) {
    if (s->kind == SymbolKind::Truncated) rho = rho ? std::min(*rho, s->rho) : s->rho;
  }
  return rho;
}

const Section6Params* Symbol::section6_params() const {
  for (const Impl* s = impl_.get(); s; s = s->inner.get()) {
    if (s->kind == SymbolKind::Section6) return &s->s6;
  }
  return nullptr;
}

std::string Symbol::describe() const { return impl_describe(*impl_); }

std::optional<Symbol::Section6Chain> Symbol::section6_chain() const {
  Section6Chain chain;
  for (const Impl* s = impl_.get(); s; s = s->inner.get()) {
    switch (s->kind) {
      case SymbolKind::Section6:
        chain.params = &s->s6;
        return chain;
      case SymbolKind::Scaled:
        chain.factor *= chain.conjugated ? std::conj(s->value) : s->value;
        break;
      case SymbolKind::Conjugate:
        chain.conjugated = !chain.conjugated;
        break;
      case SymbolKind::Truncated:
        chain.rho = std::min(chain.rho, s->rho);
        break;
      default:
        return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace hbergman
