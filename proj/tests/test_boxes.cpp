#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "hbergman/boxes.hpp"

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

// Brute-force count of non-increasing chains, independent of the closed form.
std::size_t brute_count(int n, int m) {
  if (n == 2) return std::size_t{1} << m;
  std::size_t chains = 0;
  std::vector<int> k(n - 1, 0);
  const int top = (1 << m) - 1;
  std::function<void(int, int)> rec = [&](int pos, int limit) {
    if (pos == n - 1) {
      ++chains;
      return;
    }
    for (int v = 0; v <= limit; ++v) rec(pos + 1, v);
  };
  rec(0, top);
  return chains << (n - 2);
}

SphericalPoint sample_inside(std::mt19937_64& rng, const DyadicBox& box, double margin) {
  SphericalPoint g(box.dim());
  for (int i = 0; i < box.dim(); ++i) {
    std::uniform_real_distribution<double> u(box.q[i].lo + margin, box.q[i].hi - margin);
    g[i] = u(rng);
  }
  return g;
}

}  // namespace

TEST_CASE("generation sizes") {
  CHECK(enumerate_generation(3, 0).size() == 2);
  CHECK(enumerate_generation(3, 1).size() == 6);
  CHECK(enumerate_generation(2, 2).size() == 4);
  for (int n = 2; n <= 5; ++n) {
    for (int m = 0; m <= 4; ++m) {
      const auto ids = enumerate_generation(n, m);
      CHECK(ids.size() == brute_count(n, m));
      CHECK(generation_size(n, m) == ids.size());
      std::set<BoxId> uniq(ids.begin(), ids.end());
      CHECK(uniq.size() == ids.size());
      CHECK(std::is_sorted(ids.begin(), ids.end(), [](const BoxId& a, const BoxId& b) {
        return std::tie(a.ladder, a.reflections) < std::tie(b.ladder, b.reflections);
      }));
      for (const auto& id : ids) validate_box_id(id);
    }
  }
}

TEST_CASE("box geometry examples") {
  const DyadicBox a = box_geometry(make_id(3, 0, {0, 0}, 0));
  CHECK(a.q[0].lo == 0.0);
  CHECK(a.q[0].hi == 0.5);
  CHECK(a.q[1].lo == 0.0);
  CHECK(a.q[1].hi == doctest::Approx(kPi / 2));
  CHECK(a.q[2].hi == doctest::Approx(2 * kPi));
  const DyadicBox b = box_geometry(make_id(3, 0, {0, 0}, 1));
  CHECK(b.q[1].lo == doctest::Approx(kPi / 2));
  CHECK(b.q[1].hi == doctest::Approx(kPi));
  // reflected axis: x^(j) sits at the far-from-equator end (theta = pi)
  CHECK(b.q_min[1] == doctest::Approx(kPi));
  CHECK(b.orientation[1] == -1);
  const DyadicBox c = box_geometry(make_id(3, 1, {1, 0}, 0));
  CHECK(c.q[1].lo == doctest::Approx(kPi / 4));
  CHECK(c.q[1].hi == doctest::Approx(kPi / 2));
  CHECK(c.q[2].lo == 0.0);
  CHECK(c.q[2].hi == doctest::Approx(kPi));
  CHECK(c.q[0].lo == 0.5);
  CHECK(c.q[0].hi == 0.75);
  CHECK(c.enlargement_radius == 0.125);
  CHECK_THROWS(box_geometry(make_id(3, 1, {0, 1}, 0)));
  CHECK_THROWS(box_geometry(make_id(3, 1, {2, 0}, 0)));
  CHECK_THROWS(box_geometry(make_id(3, 1, {1, 0}, 2)));
}

TEST_CASE("locate examples") {
  const BoxId o = locate(CartesianPoint(3));
  CHECK(o.generation == 0);
  CHECK(o.reflections == 0);
  const BoxId d = locate(CartesianPoint{0.3, 0.0});
  CHECK(d.generation == 0);
  CHECK(d.ladder[0] == 0);
  CHECK(locate(CartesianPoint{0.0, 0.8, 0.0}).generation == 2);
  CHECK(generation_of_radius(0.8) == 2);
  CHECK(generation_of_radius(0.75) == 2);
  CHECK(generation_of_radius(0.7499) == 1);
}

TEST_CASE("partition: sampled interior points locate to their own box") {
  std::mt19937_64 rng(0x5EED);
  for (int n = 2; n <= 4; ++n) {
    for (int m = 0; m <= 3; ++m) {
      for (const auto& id : enumerate_generation(n, m)) {
        const DyadicBox box = box_geometry(id);
        for (int s = 0; s < 5; ++s) {
          const SphericalPoint g = sample_inside(rng, box, 1e-9);
          CHECK(locate(to_cartesian(g)) == id);
        }
      }
    }
  }
}

TEST_CASE("cover: every shell point is located in exactly one box") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 2; n <= 3; ++n) {
    for (int s = 0; s < 2000; ++s) {
      CartesianPoint x(n);
      for (int i = 0; i < n; ++i) x[i] = gauss(rng);
      const double r = 0.999 * u(rng);
      x = (r / x.norm()) * x;
      const BoxId id = locate(x);
      CHECK(id.generation == generation_of_radius(r));
      if (id.generation <= 3) {
        int hits = 0;
        for (const auto& cand : enumerate_generation(n, id.generation)) {
          if (box_geometry(cand).contains_spherical(to_spherical(x), 0.0)) ++hits;
        }
        CHECK(hits >= 1);
      }
      CHECK(box_geometry(id).contains_spherical(to_spherical(x), 1e-12));
    }
  }
}

TEST_CASE("distance to box against dense sampling") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  for (int n = 2; n <= 3; ++n) {
    for (int m = 1; m <= 3; ++m) {
      const auto ids = enumerate_generation(n, m);
      for (int s = 0; s < 20; ++s) {
        const DyadicBox box = box_geometry(ids[(s * 7) % ids.size()]);
        CartesianPoint x = box.center;
        for (int i = 0; i < n; ++i) x[i] += 0.6 * box.bound_radius * gauss(rng);
        if (x.norm() >= 0.999) continue;
        // Brute-force oracle: minimum over a dense tensor sample of Q.
        const int k = n == 2 ? 400 : 60;
        double best = 1e300;
        std::array<int, 8> idx{};
        while (true) {
          SphericalPoint g(n);
          for (int i = 0; i < n; ++i) g[i] = box.q[i].lo + box.q[i].width() * idx[i] / (k - 1.0);
          best = std::min(best, (to_cartesian(g) - x).norm());
          int a = n - 1;
          while (a >= 0 && ++idx[a] == k) idx[a--] = 0;
          if (a < 0) break;
        }
        const double d = distance_to_box(box, x);
        CHECK(d <= best + 1e-12);
        // sampling spacing bounds how far above the true distance the oracle is
        CHECK(d >= best - 2.0 * box.bound_radius / (k - 1.0));
      }
    }
  }
}

TEST_CASE("enlargement membership and overlap") {
  std::mt19937_64 rng(5);
  const DyadicBox box = box_geometry(make_id(3, 2, {2, 1}, 1));
  const CartesianPoint inside = to_cartesian(sample_inside(rng, box, 1e-6));
  CHECK(enlarged_contains(box, inside));
  CHECK(overlap_count(inside, 2, 2) >= 1);
  CartesianPoint far = box.center;
  far *= -1.0;
  CHECK_FALSE(enlarged_contains(box, far));
  // (v): points of B* keep 1-|x| within [2^-m-2, 2^-m+1]
  for (int s = 0; s < 200; ++s) {
    CartesianPoint x = to_cartesian(sample_inside(rng, box, 0.0));
    std::normal_distribution<double> g(0.0, box.enlargement_radius);
    CartesianPoint y = x;
    for (int i = 0; i < 3; ++i) y[i] += g(rng);
    if (!enlarged_contains(box, y)) continue;
    CHECK(1.0 - y.norm() >= 0.0625 - 1e-12);
    CHECK(1.0 - y.norm() <= 0.5 + 1e-12);
  }
}
