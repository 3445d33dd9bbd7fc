#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "hbergman/geometry.hpp"
#include "hbergman/spherical_map.hpp"
#include "hbergman/validation.hpp"

using namespace hbergman;

namespace {

constexpr double kPi = std::numbers::pi;

BoxId first_box(int n, int m) {
  BoxId id;
  for_each_box_id(n, m, [&](const BoxId& b) {
    if (id.dim == 0) id = b;
  });
  return id;
}

CoordBox unit_box(int n, double r_lo, double r_hi, double ang) {
  CoordBox b;
  b.dim = n;
  b.q[0] = {r_lo, r_hi};
  for (int a = 1; a < n; ++a) b.q[static_cast<std::size_t>(a)] = {0.2, 0.2 + ang};
  return b;
}

Polynomial random_poly(std::mt19937_64& rng, int n, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Polynomial p = Polynomial::constant(n, u(rng));
  for (int t = 0; t < 4; ++t) {
    Polynomial m = Polynomial::constant(n, u(rng));
    std::uniform_int_distribution<int> deg(0, degree), axis(0, n - 1);
    const int d = deg(rng);
    for (int k = 0; k < d; ++k) m = m * Polynomial::variable(n, axis(rng));
    p = p + m;
  }
  return p.simplified();
}

}  // namespace

TEST_CASE("forelli-rudin integral at the origin is a beta function") {
  for (int n : {2, 3, 4}) {
    for (double t : {-0.5, 0.0, 1.0, 2.5}) {
      double rel = 1.0;
      const double v = forelli_rudin_integral(n, n + 1.0 + t, t, 0.0, &rel);
      CHECK(v == doctest::Approx(0.5 * n * boost::math::beta(0.5 * n, t + 1.0)).epsilon(1e-10));
      CHECK(rel < 1e-6);
    }
  }
}

TEST_CASE("forelli-rudin integral against a direct polar quadrature") {
  // n = 2: (1/pi) int int (1-r^2)^t r / |1 - r rho e^{i phi}|^a dr dphi.
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  for (double t : {0.0, 1.0}) {
    for (double rho : {0.3, 0.7}) {
      const double a = 2.0 + 1.0 + t;
      auto inner = [&](double r) {
        auto ang = [&](double phi) {
          return std::pow(1.0 - 2.0 * r * rho * std::cos(phi) + r * r * rho * rho, -0.5 * a);
        };
        return 2.0 * r * std::pow(1.0 - r * r, t) * GK::integrate(ang, 0.0, kPi, 12, 1e-13) / kPi;
      };
      const double oracle = GK::integrate(inner, 0.0, 1.0, 12, 1e-12);
      CHECK(forelli_rudin_integral(2, a, t, rho) == doctest::Approx(oracle).epsilon(1e-8));
    }
  }
}

TEST_CASE("forelli-rudin ratios stay bounded and the error gate works") {
  const std::vector<double> radii{0.0, 0.5, 0.9, 0.99, 0.999};
  for (auto [n, s, t] : {std::tuple{2, 1.0, 0.0}, {3, 1.0, 0.0}, {2, 0.5, 1.0}, {3, 2.0, -0.5}}) {
    const RatioStats r = check_forelli_rudin(n, s, t, radii);
    CHECK(r.pass);
    CHECK(r.spread < 10.0);
  }
  // Near t = -1 the integral itself is fine; a gate this tight must trip.
  ValidationThresholds tight;
  tight.quadrature_rel_error = 1e-300;
  CHECK_THROWS_AS(check_forelli_rudin(2, 1.0, -0.9999, {0.5}, tight), NumericalError);
  CHECK_THROWS_AS(forelli_rudin_integral(2, 2.0, -1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(check_forelli_rudin(2, 0.0, 0.0, {0.5}), std::invalid_argument);
}

TEST_CASE("schur probe") {
  const SchurProbe pr = check_schur_probe(2, 0.0, 2.0, -0.25, 12);
  CHECK(pr.primal.pass);
  CHECK(pr.dual.pass);
  CHECK(std::isfinite(pr.primal.max_ratio));
  CHECK(pr.radii.size() == 14);
  CHECK_THROWS_AS(check_schur_probe(2, 0.0, 2.0, 0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(check_schur_probe(2, 0.0, 2.0, 0.1, 4), std::invalid_argument);
  CHECK_THROWS_AS(check_schur_probe(2, 0.0, 2.0, -0.6, 4), std::invalid_argument);
}

TEST_CASE("box properties, n = 2") {
  const BoxPropertiesReport rep = check_box_properties(2, 6, 400);
  CHECK(rep.pass());
  CHECK(rep.shell.lo >= 0.25);
  CHECK(rep.shell.hi <= 2.0);
  CHECK(rep.bracket_violations == 0);
  REQUIRE(rep.overlap.size() == 3);
  CHECK(rep.overlap[0].second == rep.overlap[2].second);
  // In n = 2 all boxes of a generation have the same area.
  for (const auto& b : rep.volume) CHECK(b.hi == doctest::Approx(b.lo).epsilon(1e-12));
  const nlohmann::json j = rep.to_json();
  CHECK(j.contains("overlap"));
}

TEST_CASE("bracket ratio is controlled by the hyperbolic distance") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto point = [&](int n) {
    CartesianPoint x(n);
    do {
      for (int i = 0; i < n; ++i) x[i] = u(rng);
    } while (x.norm() >= 0.999);
    return x;
  };
  for (int n : {2, 3}) {
    for (int i = 0; i < 2000; ++i) {
      const CartesianPoint x = point(n), a = point(n), b = point(n);
      CHECK(bracket(x, a) / bracket(x, b) <= std::exp(hyperbolic_distance(a, b)) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("mean value ratio for constants is |B| / |B*|") {
  const Integrand one = [](const CartesianPoint&) { return Complex(1.0); };
  for (int n : {2, 3}) {
    for (int m : {2, 4}) {
      const MeanValueResult r = check_mean_value(one, first_box(n, m), 0.0, 16);
      CHECK(r.ratio < 1.0);
      CHECK(r.ratio > 0.1);
      CHECK(r.ratio == doctest::Approx(r.volume / r.enlarged_integral));
    }
  }
  const MeanValueSweep sw = check_mean_value_generations(one, 3, 0.0, 2, 5, 2, 8);
  CHECK(sw.pass);
  for (const auto& b : sw.axis_ratios) CHECK(std::isfinite(b.hi));
}

TEST_CASE("integration by parts sign") {
  CHECK(ibp_sign(0) == 1);
  CHECK(ibp_sign(1) == -1);
  CHECK(ibp_sign(3) == 1);
  CHECK(ibp_sign(7) == -1);
}

TEST_CASE("integration by parts with G = 1 is the plain integral") {
  std::mt19937_64 rng(3);
  for (int n : {2, 3}) {
    const Polynomial F = random_poly(rng, n, 3);
    const IbpResult r = check_integration_by_parts(F, Polynomial::constant(n, 1.0), unit_box(n, 0.3, 0.6, 0.4), 0.5);
    CHECK(r.residual < 1e-12);
    for (std::size_t k = 1; k < r.terms.size(); ++k) CHECK(r.terms[k] == 0.0);
  }
}

TEST_CASE("integration by parts closed form: F = 1, G = r theta on [0,1]^2") {
  CoordBox box;
  box.dim = 2;
  box.q[0] = {0.0, 1.0};
  box.q[1] = {0.0, 1.0};
  const double r1[2] = {1.0, 0.3};
  const double c = jacobian_unchecked(2, r1);  // J = c r
  const Polynomial G = Polynomial::variable(2, 0) * Polynomial::variable(2, 1);
  const IbpResult r = check_integration_by_parts(Polynomial::constant(2, 1.0), G, box, 0.0);
  CHECK(r.lhs == doctest::Approx(c / 6.0).epsilon(1e-13));
  REQUIRE(r.terms.size() == 4);
  // u(r, theta) = c r^2 theta / 2.
  CHECK(r.terms[0] == doctest::Approx(c / 2.0).epsilon(1e-13));
  CHECK(r.terms[1] == doctest::Approx(-c / 6.0).epsilon(1e-13));
  CHECK(r.terms[2] == doctest::Approx(-c / 4.0).epsilon(1e-13));
  CHECK(r.terms[3] == doctest::Approx(c / 12.0).epsilon(1e-13));
  CHECK(r.residual < 1e-13);
}

TEST_CASE("integration by parts on random polynomial pairs") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n : {2, 3}) {
    for (int i = 0; i < 6; ++i) {
      const Polynomial F = random_poly(rng, n, 3), G = random_poly(rng, n, 3);
      const double lo = 0.8 * u(rng);
      const IbpResult r =
          check_integration_by_parts(F, G, unit_box(n, lo, lo + 0.1 + 0.1 * u(rng), 0.3), 2.0 * u(rng) - 0.5);
      CHECK(r.residual < 1e-8);
    }
  }
  CoordBox bad = unit_box(2, 0.3, 0.3, 0.2);
  CHECK_THROWS_AS(check_integration_by_parts(Polynomial::constant(2, 1), Polynomial::constant(2, 1), bad, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_integration_by_parts(Polynomial::constant(2, 1), Polynomial::constant(2, 1),
                                             unit_box(2, 0.5, 1.0, 0.2), -0.5),
                  std::invalid_argument);
}

TEST_CASE("c_beta integrals") {
  for (int n : {2, 3}) {
    std::vector<int> alpha(static_cast<std::size_t>(n), 0), beta(static_cast<std::size_t>(n), 0);
    alpha[0] = 1;
    beta[0] = 1;
    for (int m = 0; m <= 6; ++m) CHECK(check_cbeta_integral(alpha, beta, first_box(n, m)) == doctest::Approx(0.5));
  }
  // n = 3, alpha = (1,0,1), |beta| = 2: c_beta = sin(theta_2) at its q_max value.
  for (int m : {2, 3, 5}) {
    int seen = 0;
    for_each_box_id(3, m, [&](const BoxId& id) {
      if (seen++ % 7 != 0) return;
      const DyadicBox b = box_geometry(id);
      const double oracle = b.q[0].width() * b.q[2].width() * std::sin(b.q_max[1]) * std::ldexp(1.0, 2 * m);
      CHECK(check_cbeta_integral({1, 0, 1}, {2, 0, 0}, id) == doctest::Approx(oracle).epsilon(1e-12));
    });
  }
  CHECK_THROWS_AS(check_cbeta_integral({1, 0}, {0, 0}, first_box(2, 2)), std::invalid_argument);
  CHECK_THROWS_AS(check_cbeta_integral({1, 0}, {1, 1}, first_box(2, 2)), std::invalid_argument);
  CHECK_THROWS_AS(check_cbeta_integral({2, 0}, {1, 0}, first_box(2, 2)), std::invalid_argument);
  const CbetaBand band = check_cbeta_band(3, {0, 1, 1}, {2, 0, 0}, 2, 6, 512);
  CHECK(band.pass);
  CHECK(std::isfinite(band.bands.back().hi));
}

TEST_CASE("pointwise estimate") {
  for (int n : {2, 3}) {
    const RatioStats one = check_pointwise_estimate(Polynomial::constant(n, 1.0), 2.0, 0.5, 50);
    CHECK(one.max_ratio <= 1.0 + 1e-8);
    const Polynomial f = Polynomial::variable(n, 0) * Polynomial::variable(n, 1) + Polynomial::constant(n, 0.3);
    const RatioStats a = check_pointwise_estimate(f, 2.0, 0.0, 50, 9);
    const RatioStats b = check_pointwise_estimate(3.0 * f, 2.0, 0.0, 50, 9);
    CHECK(a.max_ratio == doctest::Approx(b.max_ratio).epsilon(1e-12));
    CHECK(a.pass);
  }
  CHECK_THROWS_AS(check_pointwise_estimate(Polynomial::constant(2, 1.0), 1.0, 0.0, 4), std::invalid_argument);
}

TEST_CASE("norm domination") {
  CHECK(check_norm_domination(Polynomial::constant(2, 2.0), {1, 0}, 2.0, 0.0) == 0.0);
  // n = 2, f = x1, alpha = e1, p = 2, lambda = 0:
  // ||w||^2 = B(1, 3) = 1/3 and ||x1||^2 = 1/4.
  const double oracle = std::sqrt(boost::math::beta(1.0, 3.0) / 0.25);
  CHECK(check_norm_domination(Polynomial::variable(2, 0), {1, 0}, 2.0, 0.0) == doctest::Approx(oracle).epsilon(1e-6));
  // n = 3, p = 3, f = x3: int |x3|^3 dV = (3 int r^5 dr) * (mean of |cos|^3 on S^2) = 1/2 * 1/4.
  const double f3 = 1.0 / 8.0;
  const double w3 = 1.5 * boost::math::beta(1.5, 4.0);
  CHECK(check_norm_domination(Polynomial::variable(3, 2), {0, 0, 1}, 3.0, 0.0) ==
        doctest::Approx(std::cbrt(w3 / f3)).epsilon(1e-6));
}

TEST_CASE("compact support bound") {
  const KernelConfig inner;
  const KernelConfig outer = compact_support_outer_config();
  const Symbol one = Symbol::constant(1.0);
  const auto zero = check_compact_support_bound(Symbol::truncated(Symbol::constant(0.0), 0.5), 2, 2.0, 0.0, inner, outer);
  CHECK(zero.ratio == 0.0);
  // A radial indicator projects to a constant: P(chi) = ||chi||_1 exactly.
  const auto rad = check_compact_support_bound(Symbol::truncated(one, 0.7), 2, 2.0, 0.0, inner, outer);
  CHECK(rad.ratio == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rad.symbol_norm == doctest::Approx(0.49).epsilon(1e-8));
  CHECK_THROWS_AS(check_compact_support_bound(Symbol::truncated(one, 0.95), 2, 2.0, 0.0, inner, outer), DomainError);
  CHECK_THROWS_AS(check_compact_support_bound(one, 2, 2.0, 0.0, inner, outer), std::invalid_argument);
}

TEST_CASE("kernel derivative growth") {
  const RatioStats a = check_kernel_derivative_growth(2, 0.0, 40);
  const RatioStats b = check_kernel_derivative_growth(2, 0.0, 40);
  CHECK(a.pass);
  CHECK(a.max_ratio > 0.0);
  CHECK(a.max_ratio == b.max_ratio);
}

TEST_CASE("validation runs are deterministic under a seed") {
  const std::vector<std::string> checks{"forelli_rudin", "mean_value", "integration_by_parts", "pointwise_estimate"};
  const nlohmann::json a = run_validation(checks);
  const nlohmann::json b = run_validation(checks);
  CHECK(a == b);
  for (const auto& name : checks) {
    REQUIRE(a.contains(name));
    CHECK(a[name]["pass"].get<bool>());
    CHECK(a[name]["seed"].get<std::uint64_t>() == kDefaultSeed);
  }
  const nlohmann::json c = run_validation({"pointwise_estimate"}, 7);
  CHECK(c["pointwise_estimate"]["seed"].get<std::uint64_t>() == 7);
  CHECK(c["pointwise_estimate"]["constants"] != a["pointwise_estimate"]["constants"]);
  CHECK_THROWS_AS(run_validation({"no_such_check"}), std::invalid_argument);
  CHECK(validation_check_names().size() == 10);
}

TEST_CASE("thresholds round-trip through JSON") {
  ValidationThresholds th;
  th.cbeta_drift = 0.2;
  th.diameter_bound = 12.0;
  const ValidationThresholds back = ValidationThresholds::from_json(th.to_json());
  CHECK(back.to_json() == th.to_json());
  const ValidationThresholds partial = ValidationThresholds::from_json({{"ibp_residual", 1e-9}});
  CHECK(partial.ibp_residual == 1e-9);
  CHECK(partial.forelli_rudin_spread == 10.0);
  CHECK_THROWS(ValidationThresholds::from_json({{"bogus", 1.0}}));
}
