#include "hbergman/boxes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hbergman {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_sin_on(const Interval& iv) {
  if (iv.lo <= kHalfPi && iv.hi >= kHalfPi) return 1.0;
  return std::max(std::abs(std::sin(iv.lo)), std::abs(std::sin(iv.hi)));
}

double sq_distance(int n, const double* q, const CartesianPoint& x) {
  std::array<double, kMaxDim> y{};
  to_cartesian_unchecked(n, q, y.data());
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = y[i] - x[i];
    s += d * d;
  }
  return s;
}

void clamp_to_box(const DyadicBox& box, double* q) {
  for (int i = 0; i < box.dim(); ++i) q[i] = std::clamp(q[i], box.q[i].lo, box.q[i].hi);
}

// Projected Gauss-Newton on |sigma(q) - x|^2 over Q. Spherical coordinates are
// orthogonal, so J^T J is diagonal and the step decouples per axis.
double descend(const DyadicBox& box, const CartesianPoint& x, std::array<double, kMaxDim> q) {
  const int n = box.dim();
  double f = sq_distance(n, q.data(), x);
  for (int iter = 0; iter < 200 && f > 0.0; ++iter) {
    std::array<double, kMaxDim> y{};
    to_cartesian_unchecked(n, q.data(), y.data());
    std::array<double, kMaxDim> step{};
    for (int i = 0; i < n; ++i) {
      const double h = 1e-7 * std::max(1.0, std::abs(q[i]));
      std::array<double, kMaxDim> qp = q;
      std::array<double, kMaxDim> qm = q;
      qp[i] += h;
      qm[i] -= h;
      std::array<double, kMaxDim> yp{};
      std::array<double, kMaxDim> ym{};
      to_cartesian_unchecked(n, qp.data(), yp.data());
      to_cartesian_unchecked(n, qm.data(), ym.data());
      double g = 0.0;
      double hh = 0.0;
      for (int k = 0; k < n; ++k) {
        const double d = (yp[k] - ym[k]) / (2.0 * h);
        g += (y[k] - x[k]) * d;
        hh += d * d;
      }
      step[i] = hh > 1e-24 ? -g / hh : 0.0;
    }
    double t = 1.0;
    bool improved = false;
    std::array<double, kMaxDim> best = q;
    double fbest = f;
    for (int ls = 0; ls < 40; ++ls) {
      std::array<double, kMaxDim> trial = q;
      for (int i = 0; i < n; ++i) trial[i] += t * step[i];
      clamp_to_box(box, trial.data());
      const double ft = sq_distance(n, trial.data(), x);
      if (ft < fbest) {
        fbest = ft;
        best = trial;
        improved = true;
        break;
      }
      t *= 0.5;
    }
    if (!improved) break;
    double move = 0.0;
    for (int i = 0; i < n; ++i) move = std::max(move, std::abs(best[i] - q[i]));
    const double gain = f - fbest;
    q = best;
    f = fbest;
    if (move < 1e-15 || gain < 1e-32) break;
  }
  return f;
}

}  // namespace

std::string BoxId::to_string() const {
  std::ostringstream os;
  os << "m=" << generation << " k=(";
  for (int i = 0; i < dim - 1; ++i) os << (i ? "," : "") << ladder[i];
  os << ") mask=" << reflections;
  return os.str();
}

void validate_box_id(const BoxId& id) {
  if (id.dim < 2 || id.dim > kMaxDim) throw std::invalid_argument("box id: bad dimension");
  if (id.generation < 0 || id.generation > 40) throw std::invalid_argument("box id: bad generation");
  const long long top = (1LL << id.generation) - 1;
  if (id.ladder[0] < 0 || id.ladder[0] > top) {
    throw std::invalid_argument("box id: k_2 outside [0, 2^m - 1]: " + id.to_string());
  }
  for (int i = 1; i < id.dim - 1; ++i) {
    if (id.ladder[i] < 0 || id.ladder[i] > id.ladder[i - 1]) {
      throw std::invalid_argument("box id: ladder violates k_n <= ... <= k_2: " + id.to_string());
    }
  }
  const int polar = std::max(0, id.dim - 2);
  if ((id.reflections >> polar) != 0u) {
    throw std::invalid_argument("box id: reflection mask touches a non-polar axis");
  }
}

std::size_t generation_size(int n, int m) {
  if (n == 2) return std::size_t{1} << m;
  // Count non-increasing chains (k_2 >= ... >= k_n) with k_2 < 2^m:
  // C(2^m + n - 2, n - 1), times 2^{n-2} reflection masks.
  const long double top = std::ldexp(1.0L, m);
  long double chains = 1.0L;
  for (int i = 0; i < n - 1; ++i) chains = chains * (top + i) / (i + 1);
  return static_cast<std::size_t>(std::llround(chains)) << (n - 2);
}

void for_each_box_id(int n, int m, const std::function<void(const BoxId&)>& visit) {
  if (n < 2 || n > kMaxDim) throw DimensionError("enumerate_generation: bad dimension");
  if (m < 0 || m > 30) throw std::invalid_argument("enumerate_generation: generation outside [0, 30]");
  BoxId id;
  id.dim = n;
  id.generation = m;
  if (n == 2) {
    const int count = 1 << m;
    for (int k = 0; k < count; ++k) {
      id.ladder[0] = k;
      visit(id);
    }
    return;
  }
  const std::uint32_t masks = 1u << (n - 2);
  // Odometer over non-increasing ladders in lexicographic order.
  std::array<int, kMaxDim - 1> k{};
  const int top = (1 << m) - 1;
  while (true) {
    id.ladder = k;
    for (std::uint32_t mask = 0; mask < masks; ++mask) {
      id.reflections = mask;
      visit(id);
    }
    int pos = n - 2;
    while (pos >= 0) {
      const int limit = pos == 0 ? top : k[pos - 1];
      if (k[pos] < limit) break;
      --pos;
    }
    if (pos < 0) return;
    ++k[pos];
    for (int i = pos + 1; i < n - 1; ++i) k[i] = 0;
  }
}

std::vector<BoxId> enumerate_generation(int n, int m) {
  std::vector<BoxId> out;
  out.reserve(generation_size(n, m));
  for_each_box_id(n, m, [&](const BoxId& id) { out.push_back(id); });
  return out;
}

std::array<Interval, kMaxDim> box_intervals(const BoxId& id) {
  const int n = id.dim;
  const double scale = std::ldexp(1.0, -id.generation);
  std::array<Interval, kMaxDim> q{};
  q[0] = {1.0 - scale, 1.0 - 0.5 * scale};
  if (n == 2) {
    q[1] = {kTwoPi * id.ladder[0] * scale, kTwoPi * (id.ladder[0] + 1) * scale};
    return q;
  }
  q[1] = {kHalfPi * id.ladder[0] * scale, kHalfPi * (id.ladder[0] + 1) * scale};
  for (int j = 2; j < n - 1; ++j) {
    const double denom = id.ladder[j - 2] + 1.0;
    q[j] = {kHalfPi * id.ladder[j - 1] / denom, kHalfPi * (id.ladder[j - 1] + 1) / denom};
  }
  const double denom = id.ladder[n - 3] + 1.0;
  q[n - 1] = {kTwoPi * id.ladder[n - 2] / denom, kTwoPi * (id.ladder[n - 2] + 1) / denom};
  for (int j = 1; j < n - 1; ++j) {
    if ((id.reflections >> (j - 1)) & 1u) q[j] = {kPi - q[j].hi, kPi - q[j].lo};
  }
  return q;
}

DyadicBox box_geometry(const BoxId& id) {
  validate_box_id(id);
  const int n = id.dim;
  const int m = id.generation;
  DyadicBox box;
  box.id = id;
  box.q = box_intervals(id);
  box.q_min = SphericalPoint(n);
  box.q_max = SphericalPoint(n);
  for (int i = 0; i < n; ++i) box.orientation[i] = 1;
  for (int j = 1; j < n - 1; ++j) {
    if ((id.reflections >> (j - 1)) & 1u) box.orientation[j] = -1;
  }
  for (int i = 0; i < n; ++i) {
    box.q_min[i] = box.orientation[i] > 0 ? box.q[i].lo : box.q[i].hi;
    box.q_max[i] = box.orientation[i] > 0 ? box.q[i].hi : box.q[i].lo;
  }
  box.enlargement_radius = std::ldexp(1.0, -m - 2);

  std::array<double, kMaxDim> mid{};
  for (int i = 0; i < n; ++i) mid[i] = box.q[i].mid();
  box.center = CartesianPoint(n);
  std::array<double, kMaxDim> c{};
  to_cartesian_unchecked(n, mid.data(), c.data());
  for (int i = 0; i < n; ++i) box.center[i] = c[i];
  // Path along coordinate lines from the midpoint: axis i contributes at most
  // half its width times the largest scale factor r * prod_{l<i} sin(theta_l).
  double bound = 0.5 * box.q[0].width();
  double scale_factor = box.q[0].hi;
  for (int i = 1; i < n; ++i) {
    bound += 0.5 * box.q[i].width() * scale_factor;
    scale_factor *= max_sin_on(box.q[i]);
  }
  box.bound_radius = bound;
  return box;
}

bool DyadicBox::contains_spherical(const SphericalPoint& g, double tol) const {
  const int n = dim();
  for (int i = 0; i < n - 1; ++i) {
    if (g[i] < q[i].lo - tol || g[i] > q[i].hi + tol) return false;
  }
  const double az = g[n - 1];
  const Interval& iv = q[n - 1];
  for (double shift : {0.0, kTwoPi, -kTwoPi}) {
    if (az + shift >= iv.lo - tol && az + shift <= iv.hi + tol) return true;
  }
  return false;
}

const std::vector<DyadicBox>& generation_boxes(int n, int m) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<const std::vector<DyadicBox>>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{n, m}];
  if (!slot) {
    auto boxes = std::make_unique<std::vector<DyadicBox>>();
    const auto ids = enumerate_generation(n, m);
    boxes->reserve(ids.size());
    for (const auto& id : ids) boxes->push_back(box_geometry(id));
    slot = std::move(boxes);
  }
  return *slot;
}

int generation_of_radius(double r) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("generation_of_radius: r outside [0,1)");
  if (r < 0.5) return 0;
  int m = static_cast<int>(std::floor(-std::log2(1.0 - r)));
  m = std::max(m, 0);
  while (r >= 1.0 - std::ldexp(1.0, -m - 1)) ++m;
  while (m > 0 && r < 1.0 - std::ldexp(1.0, -m)) --m;
  return m;
}

BoxId locate(const CartesianPoint& x) {
  const int n = x.dim();
  if (n < 2) throw DimensionError("locate: dimension must be >= 2");
  if (!(x.norm_sq() < 1.0)) throw DomainError("locate: point outside the open ball");
  const SphericalPoint g = to_spherical(x);
  BoxId id;
  id.dim = n;
  id.generation = generation_of_radius(g.r());
  const int m = id.generation;
  const long long slots0 = 1LL << m;
  auto clamp_slot = [](long long k, long long slots) {
    return static_cast<int>(std::clamp<long long>(k, 0, slots - 1));
  };
  if (n == 2) {
    id.ladder[0] = clamp_slot(static_cast<long long>(std::floor(g[1] / kTwoPi * slots0)), slots0);
    return id;
  }
  for (int j = 1; j < n - 1; ++j) {
    const long long slots = (j == 1) ? slots0 : id.ladder[j - 2] + 1LL;
    const double theta = g[j];
    long long k = 0;
    if (theta < kHalfPi) {
      k = static_cast<long long>(std::floor(theta / kHalfPi * static_cast<double>(slots)));
    } else {
      id.reflections |= 1u << (j - 1);
      const double mirrored = kPi - theta;
      k = static_cast<long long>(std::ceil(mirrored / kHalfPi * static_cast<double>(slots))) - 1;
    }
    id.ladder[j - 1] = clamp_slot(k, slots);
  }
  const long long slots = id.ladder[n - 3] + 1LL;
  id.ladder[n - 2] =
      clamp_slot(static_cast<long long>(std::floor(g[n - 1] / kTwoPi * static_cast<double>(slots))),
                 slots);
  return id;
}

double distance_to_box(const DyadicBox& box, const CartesianPoint& x) {
  require_same_dim(box.center, x);
  const int n = box.dim();
  const SphericalPoint g = to_spherical(x);
  std::array<double, kMaxDim> clamp{};
  for (int i = 0; i < n; ++i) clamp[i] = g[i];
  // Pick the azimuth representative nearest to the box interval.
  {
    const Interval& iv = box.q[n - 1];
    double best = clamp[n - 1];
    double best_gap = 1e300;
    for (double shift : {0.0, kTwoPi, -kTwoPi}) {
      const double a = g[n - 1] + shift;
      const double gap = a < iv.lo ? iv.lo - a : (a > iv.hi ? a - iv.hi : 0.0);
      if (gap < best_gap) {
        best_gap = gap;
        best = a;
      }
    }
    clamp[n - 1] = best;
  }
  clamp_to_box(box, clamp.data());
  const double f_clamp = sq_distance(n, clamp.data(), x);
  if (f_clamp == 0.0) return 0.0;

  std::vector<std::pair<double, std::array<double, kMaxDim>>> starts;
  starts.emplace_back(f_clamp, clamp);
  std::array<double, kMaxDim> mid{};
  for (int i = 0; i < n; ++i) mid[i] = box.q[i].mid();
  starts.emplace_back(sq_distance(n, mid.data(), x), mid);
  for (unsigned corner = 0; corner < (1u << n); ++corner) {
    std::array<double, kMaxDim> c{};
    for (int i = 0; i < n; ++i) c[i] = ((corner >> i) & 1u) ? box.q[i].hi : box.q[i].lo;
    starts.emplace_back(sq_distance(n, c.data(), x), c);
  }
  std::sort(starts.begin() + 1, starts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double best = f_clamp;
  const std::size_t runs = std::min<std::size_t>(starts.size(), 4);
  for (std::size_t s = 0; s < runs; ++s) best = std::min(best, descend(box, x, starts[s].second));
  return std::sqrt(best);
}

bool enlarged_contains(const DyadicBox& box, const CartesianPoint& x) {
  const double delta = box.enlargement_radius;
  const CartesianPoint diff = x - box.center;
  if (diff.norm() > box.bound_radius + delta) return false;
  if (box.contains_spherical(to_spherical(x))) return true;
  return distance_to_box(box, x) < delta;
}

bool enlarged_contains(const BoxId& id, const CartesianPoint& x) {
  return enlarged_contains(box_geometry(id), x);
}

int overlap_count(const CartesianPoint& x, int m_lo, int m_hi) {
  if (!(x.norm_sq() < 1.0)) throw DomainError("overlap_count: point outside the open ball");
  int count = 0;
  const double r = x.norm();
  for (int m = std::max(0, m_lo); m <= m_hi; ++m) {
    const double delta = std::ldexp(1.0, -m - 2);
    const double r_lo = 1.0 - std::ldexp(1.0, -m);
    const double r_hi = 1.0 - std::ldexp(1.0, -m - 1);
    if (r < r_lo - delta || r > r_hi + delta) continue;
    for (const auto& box : generation_boxes(x.dim(), m)) {
      if (enlarged_contains(box, x)) ++count;
    }
  }
  return count;
}

}  // namespace hbergman
