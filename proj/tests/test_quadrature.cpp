#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "hbergman/quadrature.hpp"

using namespace hbergman;

namespace {

constexpr double kPi = std::numbers::pi;

BoxId make_id(int n, int m, std::initializer_list<int> ladder, std::uint32_t mask) {
  BoxId id;
  id.dim = n;
  id.generation = m;
  int i = 0;
  for (int k : ladder) id.ladder[i++] = k;
  id.reflections = mask;
  return id;
}

const Integrand kOne = [](const CartesianPoint&) { return Complex(1.0); };

QuadratureGrid grid_with(int nodes, int refine) {
  QuadratureGrid g;
  g.nodes_per_axis = {nodes};
  g.refinement_level = refine;
  return g;
}

// Independent radial oracle: tanh-sinh of c n r^{n-1} (1-r^2)^lambda after
// r = sin(phi), which removes the endpoint singularity for lambda < 0.
double radial_oracle(int n, double lambda, double a, double b) {
  const double c = std::tgamma(n / 2.0 + lambda + 1.0) / (std::tgamma(n / 2.0) * std::tgamma(lambda + 1.0)) * 2.0 / n;
  auto f = [&](double phi) { return c * n * std::pow(std::sin(phi), n - 1) * std::pow(std::cos(phi), 2.0 * lambda + 1.0); };
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, std::asin(a), std::asin(b));
}

}  // namespace

TEST_CASE("normalization constant") {
  for (int n = 2; n <= 6; ++n) CHECK(std::abs(normalization_constant(n, 0.0) - 1.0) < 1e-12);
  CHECK(normalization_constant(3, 1.0) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK_THROWS(normalization_constant(3, -1.0));
  for (double lambda : {-0.5, 0.0, 1.0, 2.5}) {
    for (int n = 2; n <= 4; ++n) CHECK(radial_oracle(n, lambda, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("norm spec conjugacy") {
  const NormSpec s = NormSpec::make(3.0);
  CHECK(std::abs(1.0 / s.p + 1.0 / s.q - 1.0) < 1e-12);
  CHECK_THROWS(NormSpec::make(1.0));
}

TEST_CASE("integrate_box half ball examples") {
  const DyadicBox upper = box_geometry(make_id(3, 0, {0, 0}, 0));
  const auto v0 = integrate_box(kOne, coord_box(upper), MeasureSpec::make(3, 0.0), grid_with(8, 1));
  CHECK(v0.value.real() == doctest::Approx(1.0 / 16).epsilon(1e-13));
  CHECK(v0.error < 1e-12);
  const auto v1 = integrate_box(kOne, coord_box(upper), MeasureSpec::make(3, 1.0), grid_with(8, 1));
  CHECK(v1.value.real() == doctest::Approx(17.0 / 128).epsilon(1e-13));
  const Integrand zero = [](const CartesianPoint&) { return Complex(0.0); };
  CHECK(integrate_box(zero, coord_box(upper), MeasureSpec::make(3, 1.0), grid_with(8, 1)).value == Complex(0.0));
  const Integrand bad = [](const CartesianPoint& x) { return Complex(1.0 / (x[0] - x[0])); };
  CHECK_THROWS_AS(integrate_box(bad, coord_box(upper), MeasureSpec::make(3, 0.0), grid_with(4, 0)), NumericalError);
}

TEST_CASE("box volume agrees with tensor rule and radial oracle") {
  for (int n = 2; n <= 4; ++n) {
    for (double lambda : {-0.5, 0.0, 1.0, 2.5}) {
      const MeasureSpec spec = MeasureSpec::make(n, lambda);
      for (int m = 0; m <= 3; ++m) {
        double total = 0.0;
        for (const auto& id : enumerate_generation(n, m)) {
          const double v = box_volume(id, spec);
          CHECK(v > 0.0);
          total += v;
          if (id.ladder[0] % 3 == 0) {
            const auto t = integrate_box(kOne, coord_box(box_geometry(id)), spec, grid_with(10, 0));
            CHECK(t.value.real() == doctest::Approx(v).epsilon(1e-9));
          }
        }
        const double a = 1.0 - std::ldexp(1.0, -m);
        const double b = 1.0 - std::ldexp(1.0, -m - 1);
        CHECK(total == doctest::Approx(radial_oracle(n, lambda, a, b)).epsilon(1e-11));
        CHECK(total == doctest::Approx(shell_mass(n, lambda, a, b)).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("box volume closed form at lambda zero") {
  // n=3: (r_hi^3 - r_lo^3)/3 * (cos lo - cos hi) * dphi / (4 pi / 3)
  const MeasureSpec spec = MeasureSpec::make(3, 0.0);
  for (const auto& id : enumerate_generation(3, 2)) {
    const DyadicBox b = box_geometry(id);
    const double rad = (std::pow(b.q[0].hi, 3) - std::pow(b.q[0].lo, 3)) / 3.0;
    const double pol = std::cos(b.q[1].lo) - std::cos(b.q[1].hi);
    const double exact = rad * pol * b.q[2].width() / (4.0 * kPi / 3.0);
    CHECK(box_volume(id, spec) == doctest::Approx(exact).epsilon(1e-13));
  }
  CHECK(box_volume(make_id(3, 0, {0, 0}, 0), spec) == doctest::Approx(1.0 / 16).epsilon(1e-14));
  CHECK(box_volume(make_id(3, 0, {0, 0}, 1), spec) == doctest::Approx(1.0 / 16).epsilon(1e-14));
}

TEST_CASE("integrate_ball covered mass and symmetry") {
  QuadratureGrid g = grid_with(8, 1);
  g.angular_taper = 2;
  const MeasureSpec disk = MeasureSpec::make(2, 0.0);
  const auto cover = integrate_ball(kOne, disk, 10, g);
  const double covered = std::pow(1.0 - std::ldexp(1.0, -11), 2);
  CHECK(std::abs(cover.value.real() - covered) < 1e-10);
  const MeasureSpec w = MeasureSpec::make(3, 2.5);
  g.angular_taper = 1;
  const auto c2 = integrate_ball(kOne, w, 5, g);
  CHECK(std::abs(c2.value.real() + outer_shell_mass(3, 2.5, 1.0 - std::ldexp(1.0, -6)) - 1.0) < 1e-10);
  const Integrand odd = [](const CartesianPoint& x) { return Complex(x[0]); };
  CHECK(std::abs(integrate_ball(odd, disk, 6, g).value) < 1e-12);
}

TEST_CASE("norm_p") {
  // a generation-0 disk box spans the full circle, so use 16 angular nodes
  QuadratureGrid g = grid_with(16, 0);
  const MeasureSpec disk = MeasureSpec::make(2, 0.0);
  const Integrand x1 = [](const CartesianPoint& x) { return Complex(x[0]); };
  const double n2 = norm_p(x1, NormSpec::make(2.0), disk, 14, g);
  // covered disk of radius rho: (1/pi) int r^3 cos^2 = rho^4 / 4
  CHECK(n2 * n2 == doctest::Approx(0.25 * std::pow(1.0 - std::ldexp(1.0, -15), 4)).epsilon(1e-12));
  const Integrand x3 = [](const CartesianPoint& x) { return Complex(3.0 * x[0]); };
  CHECK(norm_p(x3, NormSpec::make(3.0), disk, 6, g) ==
        doctest::Approx(3.0 * norm_p(x1, NormSpec::make(3.0), disk, 6, g)).epsilon(1e-13));
}

TEST_CASE("refinement convergence on smooth integrands") {
  const MeasureSpec spec = MeasureSpec::make(3, 1.0);
  const DyadicBox box = box_geometry(make_id(3, 1, {1, 0}, 1));
  const Integrand f = [](const CartesianPoint& x) { return Complex(std::exp(2.0 * x[0]) * std::cos(3.0 * x[1]), x[2]); };
  QuadratureGrid g;
  g.nodes_per_axis = {3};
  g.refinement_level = 1;
  const double e1 = integrate_box(f, coord_box(box), spec, g).error;
  g.refinement_level = 2;
  const double e2 = integrate_box(f, coord_box(box), spec, g).error;
  CHECK(e2 < 0.25 * e1);
}

TEST_CASE("prefix integrals") {
  const MeasureSpec spec = MeasureSpec::make(3, 0.5);
  const DyadicBox box = box_geometry(make_id(3, 2, {3, 1}, 1));
  QuadratureGrid g = grid_with(4, 0);
  const PrefixGrid one = prefix_integrals(kOne, box, spec, 6, g);
  CHECK(one.far_corner().real() == doctest::Approx(box_volume(box, spec)).epsilon(1e-12));
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      for (int k = 0; k < 6; ++k) {
        const Complex v = one.at({i, j, k});
        CHECK(v.real() > 0.0);
        if (i > 0) CHECK(v.real() >= one.at({i - 1, j, k}).real());
        if (j > 0) CHECK(v.real() >= one.at({i, j - 1, k}).real());
        if (k > 0) CHECK(v.real() >= one.at({i, j, k - 1}).real());
      }
    }
  }
  // Odd about the azimuth midline of the box.
  const double mid = box.q[2].mid();
  const Integrand odd = [&](const CartesianPoint& x) {
    const SphericalPoint s = to_spherical(x);
    double t = s[2];
    if (t < box.q[2].lo - 1.0) t += 2 * kPi;
    return Complex(std::sin(4.0 * (t - mid) / box.q[2].width() * kPi / 4.0));
  };
  CHECK(std::abs(prefix_integrals(odd, box, spec, 4, g).far_corner()) < 1e-15);
  // Assembled from the same cell values as integrate_box with matching panels.
  const Integrand f = [](const CartesianPoint& x) { return Complex(x[0] * x[0] + 0.3, x[1] * x[2]); };
  QuadratureGrid pg = g;
  pg.panels_per_axis = 5;
  const Complex full = integrate_box(f, coord_box(box), spec, pg).value;
  CHECK(std::abs(prefix_integrals(f, box, spec, 5, g).far_corner() - full) < 1e-12 * std::abs(full));
  // Anchor corner: partial box [x^(j), corner] computed directly.
  const PrefixGrid pf = prefix_integrals(f, box, spec, 4, g);
  CoordBox part = coord_box(box);
  for (int a = 0; a < 3; ++a) {
    const double h = box.q[a].width() / 4.0;
    if (box.orientation[a] > 0) {
      part.q[a].hi = box.q[a].lo + 2 * h;
    } else {
      part.q[a].lo = box.q[a].hi - 2 * h;
    }
  }
  QuadratureGrid pg2 = g;
  pg2.panels_per_axis = 2;
  CHECK(std::abs(pf.at({1, 1, 1}) - integrate_box(f, part, spec, pg2).value) < 1e-13);
}

TEST_CASE("pairwise accumulator matches span reduction") {
  std::vector<double> v;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 1001; ++i) v.push_back(u(rng));
  PairwiseAccumulator<double> acc;
  for (double x : v) acc.add(x);
  CHECK(acc.total() == pairwise_sum(v));
  double plain = 0.0;
  for (double x : v) plain += x;
  CHECK(acc.total() == doctest::Approx(plain).epsilon(1e-12));
}
