#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "hbergman/symbols.hpp"

using namespace hbergman;

namespace {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

Section6Params params(Profile f, double lambda, int n, Section6Variant v) {
  Section6Params p;
  p.profile = std::move(f);
  p.lambda = lambda;
  p.n = n;
  p.variant = v;
  return p;
}

CartesianPoint point_at_radius(std::mt19937_64& rng, int n, double r) {
  std::normal_distribution<double> g;
  CartesianPoint x(n);
  for (int i = 0; i < n; ++i) x[i] = g(rng);
  return (r / x.norm()) * x;
}

}  // namespace

TEST_CASE("basic symbol kinds") {
  const Symbol c = Symbol::constant({2.0, -1.0});
  CHECK(c(CartesianPoint{0.3, 0.1}) == Complex(2.0, -1.0));
  CHECK(c.is_radial());
  const Symbol t = Symbol::truncated(c, 0.5);
  CHECK(t(CartesianPoint{0.7, 0.0}) == Complex(0.0));
  CHECK(t(CartesianPoint{0.3, 0.0}) == Complex(2.0, -1.0));
  CHECK(*t.support_radius() == 0.5);
  const Symbol e = Symbol::expression(parse_expression("x1 + i*x2", 2));
  CHECK_FALSE(e.is_radial());
  CHECK(std::abs(Symbol::conjugate(e)(CartesianPoint{0.1, 0.2}) - Complex(0.1, -0.2)) < 1e-16);
  CHECK(std::abs(Symbol::scaled(e, 2.0)(CartesianPoint{0.1, 0.2}) - Complex(0.2, 0.4)) < 1e-16);
  BoxId id;
  id.dim = 2;
  id.generation = 1;
  id.ladder[0] = 0;
  const Symbol b = Symbol::box_restricted(c, id);
  CHECK(b(CartesianPoint{0.6, 0.1}) == Complex(2.0, -1.0));
  CHECK(b(CartesianPoint{-0.6, -0.1}) == Complex(0.0));
  CHECK(b(CartesianPoint{0.3, 0.1}) == Complex(0.0));
}

TEST_CASE("section6 examples") {
  const Symbol s = Symbol::section6(params(Profile::constant(1.0), 0.0, 3, Section6Variant::Bounded));
  for (double r : {0.1, 0.5, 0.9, 0.999}) {
    const Complex expect = std::pow(r, -2.0) * std::exp(Complex(0.0, -kPi * std::log(1.0 - r)));
    CHECK(std::abs(s(CartesianPoint{0.0, r, 0.0}) - expect) < 1e-12 * std::abs(expect));
  }
  const auto p1 = params(Profile::power(1.0), 0.0, 2, Section6Variant::Bounded);
  CHECK(g_of(p1, 5.0) == doctest::Approx(4.0));
  const Symbol s1 = Symbol::section6(p1);
  CHECK(std::abs(s1(CartesianPoint{0.8, 0.0})) == doctest::Approx(1.0 / 0.8 / 0.2));
  const auto pc = params(Profile::power(1.0), 0.0, 2, Section6Variant::Compact);
  CHECK(g_of(pc, 3.0) == doctest::Approx(4.0));
  const auto pe = params(Profile::constant(1.0), 0.0, 2, Section6Variant::Bounded);
  CHECK(g_of(pe, 1.0) == 0.0);
  CHECK(g_of(pe, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS(Symbol::section6(params(Profile::constant(1.0), -0.5, 2, Section6Variant::Bounded)));
  CHECK_THROWS(Symbol::section6(params(Profile::power(0.2), -0.5, 2, Section6Variant::Bounded)));
  CHECK_NOTHROW(Symbol::section6(params(Profile::power(0.5), -0.5, 2, Section6Variant::Bounded)));
  CHECK_THROWS_AS(s1(CartesianPoint{0.0, 0.0}), DomainError);
}

TEST_CASE("section6 is radial with exact modulus") {
  std::mt19937_64 rng(0x5EED);
  std::uniform_real_distribution<double> u(0.05, 0.995);
  for (double lambda : {0.0, 1.0, 2.5}) {
    for (int n = 2; n <= 4; ++n) {
      for (auto v : {Section6Variant::Bounded, Section6Variant::Compact}) {
        const auto p = params(Profile::power(1.0), lambda, n, v);
        const Symbol s = Symbol::section6(p);
        for (int k = 0; k < 50; ++k) {
          const double r0 = u(rng);
          // sign flips keep |x| bit-identical
          CartesianPoint x = point_at_radius(rng, n, r0);
          CartesianPoint y = x;
          for (int i = 0; i < n; i += 2) y[i] = -y[i];
          const double r = x.norm();
          const Complex a = s(x);
          const Complex b = s(y);
          CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
          const double mod = std::pow(r, 1 - n) * std::pow(1 - r * r, -lambda) / (1 - r);
          CHECK(std::abs(a) == doctest::Approx(mod).epsilon(1e-12));
          // weighted radial product equals f(x) e^{i pi g(x)}; the phase of the
          // direct product inherits the rounding of 1 - r amplified by g'
          const Complex w = s.weighted_radial(1 - r, n, lambda);
          const Complex direct = std::pow(r, n - 1) * std::pow(1 - r * r, lambda) * a;
          CHECK(std::abs(w) == doctest::Approx(std::abs(direct)).epsilon(1e-12));
          CHECK(std::abs(w - direct) < 1e-6 * std::abs(w));
        }
      }
    }
  }
}

TEST_CASE("g monotone, inverse and custom profile quadrature") {
  const auto pb = params(Profile::power(0.5), 0.5, 3, Section6Variant::Bounded);
  double prev = -1.0;
  for (double x = 1.0; x < 1e4; x *= 1.3) {
    const double g = g_of(pb, x);
    CHECK(g > prev);
    prev = g;
    CHECK(g_inverse(pb, g) == doctest::Approx(x).epsilon(1e-12));
  }
  // Custom f(x) = 2 + sin(x): oracle by adaptive Gauss-Kronrod.
  const Profile f = Profile::from_function([](double x) { return 2.0 + std::sin(x); }, "two_plus_sin");
  const auto pcust = params(f, 0.0, 2, Section6Variant::Bounded);
  pcust.validate();
  for (double x : {1.0, 1.7, 5.0, 37.5, 300.0}) {
    const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [](double y) { return (2.0 + std::sin(y)) / y; }, 1.0, x, 20, 1e-14);
    CHECK(g_of(pcust, x) == doctest::Approx(oracle).epsilon(1e-11));
    CHECK(g_inverse(pcust, oracle) == doctest::Approx(x).epsilon(1e-10));
  }
}

TEST_CASE("oscillation knots") {
  const auto p = params(Profile::constant(1.0), 0.0, 2, Section6Variant::Bounded);
  for (int m = 0; m <= 10; ++m) {
    const auto knots = oscillation_knots(p, m);
    const double lo = 1 - std::ldexp(1.0, -m);
    const double hi = 1 - std::ldexp(1.0, -m - 1);
    const double g_lo = g_of(p, 1 / (1 - lo));
    const double g_hi = g_of(p, 1 / (1 - hi));
    // log 2 < 1, so each shell holds at most one integer level
    CHECK(knots.size() == static_cast<std::size_t>(std::floor(g_hi) - std::ceil(g_lo) + 1));
    for (double r : knots) {
      CHECK(r >= lo);
      CHECK(r <= hi);
      const double g = g_of(p, 1 / (1 - r));
      CHECK(std::abs(g - std::round(g)) < 1e-12);
    }
  }
  const auto pc = params(Profile::power(1.0), 0.0, 2, Section6Variant::Compact);
  for (int m = 1; m <= 8; ++m) {
    const auto knots = oscillation_knots(pc, m);
    const double expect = g_of(pc, std::ldexp(1.0, m + 1)) - g_of(pc, std::ldexp(1.0, m));
    CHECK(std::abs(static_cast<double>(knots.size()) - expect) <= 1.0);
    CHECK(std::is_sorted(knots.begin(), knots.end()));
  }
}

TEST_CASE("radial breaks respect truncation") {
  const auto p = params(Profile::power(1.0), 0.0, 2, Section6Variant::Compact);
  const Symbol s = Symbol::truncated(Symbol::section6(p), 0.9);
  std::vector<double> br;
  CHECK(s.for_each_radial_break(0.75, 0.875, [&](double sc) { br.push_back(1 - sc); }));
  CHECK(!br.empty());
  for (double r : br) CHECK(r <= 0.875);
  br.clear();
  s.for_each_radial_break(0.875, 0.9375, [&](double sc) { br.push_back(1 - sc); });
  for (double r : br) CHECK(r <= 0.9);
  CHECK_FALSE(Symbol::constant(1.0).for_each_radial_break(0.0, 0.5, [](double) {}));
}

TEST_CASE("symbols from json specs") {
  using nlohmann::json;
  const CartesianPoint x{0.3, 0.4};
  CHECK(symbol_from_json(json{{"kind", "constant"}, {"value", 2.5}}, 2)(x) == Complex(2.5));
  CHECK(symbol_from_json(json::parse(R"({"kind":"constant","value":[1,-2]})"), 2)(x) == Complex(1.0, -2.0));

  const Symbol e = symbol_from_json(json{{"kind", "expression"}, {"text", "x1*x2 + i"}}, 2);
  CHECK(std::abs(e(x) - Complex(0.12, 1.0)) < 1e-15);
  CHECK_FALSE(e.is_radial());

  const Symbol r = symbol_from_json(json{{"kind", "radial"}, {"text", "1 - r^2"}}, 2);
  CHECK(r.is_radial());
  CHECK(std::abs(r(x) - Complex(0.75)) < 1e-15);

  // section6 defaults: bounded variant, lambda from the caller
  const Symbol s = symbol_from_json(json::parse(R"({"kind":"section6","profile":{"type":"const","value":1}})"), 3, 0.5);
  REQUIRE(s.section6_params() != nullptr);
  CHECK(s.section6_params()->lambda == 0.5);
  CHECK(s.section6_params()->n == 3);
  CHECK(s.section6_params()->variant == Section6Variant::Bounded);
  const Symbol direct = Symbol::section6(params(Profile::constant(1.0), 0.5, 3, Section6Variant::Bounded));
  const CartesianPoint y{0.2, -0.5, 0.6};
  CHECK(std::abs(s(y) - direct(y)) < 1e-15);

  const Symbol c = symbol_from_json(
      json::parse(R"({"kind":"section6","profile":{"type":"power","exponent":1},"lambda":0,"variant":"compact"})"), 2);
  CHECK(c.section6_params()->variant == Section6Variant::Compact);
  CHECK(c.section6_params()->profile.type == ProfileType::Power);

  const Symbol t = symbol_from_json(
      json::parse(R"({"kind":"truncated","rho":0.4,"symbol":{"kind":"constant","value":3}})"), 2);
  CHECK(*t.support_radius() == 0.4);
  CHECK(t(CartesianPoint{0.3, 0.0}) == Complex(3.0));
  CHECK(t(CartesianPoint{0.5, 0.0}) == Complex(0.0));
}

TEST_CASE("malformed json specs are rejected") {
  using nlohmann::json;
  for (const char* bad : {
           R"({"kind":"nope"})",
           R"({"value":1})",
           R"([1,2])",
           R"({"kind":"constant"})",
           R"({"kind":"constant","value":"one"})",
           R"({"kind":"constant","value":1,"extra":0})",
           R"({"kind":"radial","text":"x1 + r"})",
           R"({"kind":"section6"})",
           R"({"kind":"section6","profile":{"type":"exp"}})",
           R"({"kind":"section6","profile":{"type":"const","value":1},"variant":"wild"})",
           R"({"kind":"section6","profile":{"type":"const","value":1},"lambda":-2})",
           R"({"kind":"truncated","rho":0.5})",
       }) {
    CAPTURE(bad);
    CHECK_THROWS_AS(symbol_from_json(json::parse(bad), 2), std::invalid_argument);
  }
  try {
    symbol_from_json(json{{"kind", "expression"}, {"text", "x1 +* 2"}}, 2);
    FAIL("expected a parse error");
  } catch (const ParseError& err) {
    CHECK(err.offset() == 4);
  }
}
