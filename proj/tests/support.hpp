#pragma once

// Hand-rolled generators and a test-side subembedding oracle shared by the
// unit tests and the acceptance binary.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "curvcert/metric.hpp"
#include "curvcert/plane.hpp"

namespace testgen {

using curvcert::Point2;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * (static_cast<double>(eng_() >> 11) * 0x1.0p-53);
  }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }
  Point2 point(double lo = 0.0, double hi = 1.0) { return {uniform(lo, hi), uniform(lo, hi)}; }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

inline std::vector<std::vector<double>> euclidean_table(const std::vector<Point2>& p) {
  std::vector<std::vector<double>> t(p.size(), std::vector<double>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) t[i][j] = curvcert::dist(p[i], p[j]);
  return t;
}

inline curvcert::GraphSpace random_tree(Rng& rng, std::size_t n, double wmin = 0.1, double wmax = 1.1) {
  curvcert::GraphSpace g;
  g.vertices = n;
  for (std::size_t v = 1; v < n; ++v) g.edges.push_back({rng.below(v), v, rng.uniform(wmin, wmax)});
  return g;
}

inline curvcert::GraphSpace random_connected_graph(Rng& rng, std::size_t n, double extra_edge_p) {
  curvcert::GraphSpace g = random_tree(rng, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform() < extra_edge_p) g.edges.push_back({i, j, rng.uniform(0.1, 1.1)});
  return g;
}

inline curvcert::GraphSpace cycle_graph(std::size_t n, double circumference) {
  curvcert::GraphSpace g;
  g.vertices = n;
  for (std::size_t v = 0; v < n; ++v) g.edges.push_back({v, (v + 1) % n, circumference / static_cast<double>(n)});
  return g;
}

// Points on a circle of the given circumference with the arc metric.
inline std::vector<std::vector<double>> circle_table(Rng& rng, std::size_t n, double circ) {
  std::vector<double> a(n);
  for (double& x : a) x = rng.uniform(0.0, circ);
  std::vector<std::vector<double>> t(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double d = std::abs(a[i] - a[j]);
      t[i][j] = std::min(d, circ - d);
    }
  return t;
}

// Points on the unit sphere with the great-circle metric.
inline std::vector<std::vector<double>> sphere_table(Rng& rng, std::size_t n) {
  std::vector<std::array<double, 3>> p(n);
  for (auto& q : p) {
    const double a = rng.uniform(0.0, 2.0 * std::numbers::pi), z = rng.uniform(-1.0, 1.0);
    const double r = std::sqrt(1.0 - z * z);
    q = {r * std::cos(a), r * std::sin(a), z};
  }
  std::vector<std::vector<double>> t(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double c = p[i][0] * p[j][0] + p[i][1] * p[j][1] + p[i][2] * p[j][2];
      t[i][j] = i == j ? 0.0 : std::acos(std::clamp(c, -1.0, 1.0));
    }
  return t;
}

// Polyline from x to y with random bends, rescaled so its length stays
// within |x - y| + h.
inline std::vector<Point2> random_short_path(Rng& rng, Point2 x, Point2 y, double h) {
  const std::size_t bends = 1 + rng.below(5);
  std::vector<double> ts;
  for (std::size_t k = 0; k < bends; ++k) ts.push_back(rng.uniform());
  std::sort(ts.begin(), ts.end());
  const Point2 dir = y - x;
  const Point2 nrm{-dir.y, dir.x};
  std::vector<double> offs;
  for (std::size_t k = 0; k < bends; ++k) offs.push_back(rng.uniform(-1.0, 1.0));
  auto build = [&](double scale) {
    std::vector<Point2> p = {x};
    for (std::size_t k = 0; k < bends; ++k) p.push_back(x + ts[k] * dir + (scale * offs[k]) * nrm);
    p.push_back(y);
    return p;
  };
  auto length = [](const std::vector<Point2>& p) {
    double l = 0.0;
    for (std::size_t i = 1; i < p.size(); ++i) l += curvcert::dist(p[i - 1], p[i]);
    return l;
  };
  const double l = curvcert::dist(x, y);
  const double target = l + h * rng.uniform();
  double lo = 0.0, hi = 1.0;
  while (length(build(hi)) < target && hi < 1e6) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (length(build(mid)) <= target ? lo : hi) = mid;
  }
  return build(lo);
}

// Valid two-triangle instance or nothing when the random sides do not close.
inline std::optional<curvcert::TwoTriangleInstance> random_two_triangle(Rng& rng, double eps) {
  const Point2 x0p = rng.point(-2, 2), x1p = rng.point(-2, 2), x2p = rng.point(-2, 2);
  const double r1p = curvcert::dist(x0p, x1p), r2p = curvcert::dist(x0p, x2p), c = curvcert::dist(x1p, x2p);
  const double h = eps / std::max({1.0, r1p, r2p});
  // Push the unprimed sides to the extreme of the allowed range half the time.
  const double r1 = r1p + h * (rng.uniform() < 0.5 ? 1.0 : rng.uniform());
  const double r2 = r2p + h * (rng.uniform() < 0.5 ? 1.0 : rng.uniform());
  if (c > r1 + r2 || c < std::abs(r1 - r2) || r1 <= 0.0) return std::nullopt;
  const double ang = curvcert::included_angle(r1, r2, c);
  const double rot = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const Point2 x0 = rng.point(-1, 1);
  const Point2 x1 = x0 + Point2{r1 * std::cos(rot), r1 * std::sin(rot)};
  const double side = rng.uniform() < 0.5 ? 1.0 : -1.0;
  const Point2 x2 = x0 + Point2{r2 * std::cos(rot + side * ang), r2 * std::sin(rot + side * ang)};
  try {
    return curvcert::make_two_triangle_instance(x0, x1, x2, x0p, x1p, x2p, rng.uniform(), rng.uniform(), eps);
  } catch (const curvcert::Error&) {
    return std::nullopt;  // rounding pushed a hypothesis past its tolerance
  }
}

// Convex polygon: sorted random angles on an ellipse, counterclockwise.
inline std::vector<Point2> random_convex_polygon(Rng& rng, std::size_t n) {
  std::vector<double> ang;
  for (std::size_t k = 0; k < n; ++k) ang.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
  std::sort(ang.begin(), ang.end());
  const double a = rng.uniform(0.5, 1.5), b = rng.uniform(0.5, 1.5);
  std::vector<Point2> p;
  for (double t : ang) p.push_back({a * std::cos(t), b * std::sin(t)});
  return p;
}

// Star-shaped, generally non-convex polygon around the origin.
inline std::vector<Point2> random_star_polygon(Rng& rng, std::size_t n) {
  std::vector<Point2> p;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * (static_cast<double>(k) + rng.uniform(0.1, 0.9)) / static_cast<double>(n);
    const double r = rng.uniform(0.4, 1.2);
    p.push_back({r * std::cos(t), r * std::sin(t)});
  }
  return p;
}

// Two convex polygons on opposite sides of the segment from (0, 0) to
// (0, len): q1 to the left (x <= 0), q2 to the right.
struct RandomGluing {
  std::vector<Point2> q1, q2;
  Point2 s0, s1;
};

inline std::vector<Point2> convex_cap(Rng& rng, double len, double side, std::size_t extra) {
  // Vertices on an arc bulging to `side` between (0, len) and (0, 0).
  std::vector<double> ts;
  for (std::size_t k = 0; k < extra; ++k) ts.push_back(rng.uniform(0.05, 0.95));
  std::sort(ts.begin(), ts.end());
  const double bulge = rng.uniform(0.3, 1.5);
  std::vector<Point2> pts;
  for (double t : ts) {
    const double ang = std::numbers::pi * t;
    pts.push_back({side * bulge * std::sin(ang), 0.5 * len * (1.0 - std::cos(ang))});
  }
  return pts;
}

// Half the time a piece is a triangle whose apex may dip below s0, which
// makes the hinge at s0 reflex when both pieces do.
inline RandomGluing random_gluing(Rng& rng) {
  RandomGluing g;
  const double len = rng.uniform(0.5, 2.0);
  g.s0 = {0.0, 0.0};
  g.s1 = {0.0, len};
  auto apex = [&](double side) {
    return Point2{side * rng.uniform(0.3, 1.5), rng.uniform(-1.0, len + 0.5)};
  };
  // q2 (right side): (0,0), points going up, (0,len): counterclockwise.
  g.q2 = {g.s0};
  if (rng.uniform() < 0.5) {
    g.q2.push_back(apex(1.0));
  } else {
    for (const Point2& p : convex_cap(rng, len, 1.0, 1 + rng.below(3))) g.q2.push_back(p);
  }
  g.q2.push_back(g.s1);
  // q1 (left side): (0,len), points going down, (0,0): counterclockwise.
  g.q1 = {g.s1};
  if (rng.uniform() < 0.5) {
    g.q1.push_back(apex(-1.0));
  } else {
    auto left = convex_cap(rng, len, -1.0, 1 + rng.below(3));
    for (auto it = left.rbegin(); it != left.rend(); ++it) g.q1.push_back(*it);
  }
  g.q1.push_back(g.s0);
  return g;
}

// Length of the path a -> s -> b with s at parameter t on [s0, s1].
inline double seam_cost(Point2 s0, Point2 s1, Point2 a, Point2 b, double t) {
  const Point2 s = curvcert::lerp(s0, s1, t);
  return curvcert::dist(a, s) + curvcert::dist(s, b);
}

inline double sampled_seam_distance(Point2 s0, Point2 s1, Point2 a, Point2 b, int count) {
  double best = INFINITY;
  for (int k = 0; k <= count; ++k) best = std::min(best, seam_cost(s0, s1, a, b, static_cast<double>(k) / count));
  return best;
}

// Dense sampling, then ternary search on the convex seam cost around the
// best sample. Sampling alone is off by up to a grid step near the seam.
inline double refined_seam_distance(Point2 s0, Point2 s1, Point2 a, Point2 b, int count) {
  int arg = 0;
  double best = seam_cost(s0, s1, a, b, 0.0);
  for (int k = 1; k <= count; ++k) {
    const double c = seam_cost(s0, s1, a, b, static_cast<double>(k) / count);
    if (c < best) {
      best = c;
      arg = k;
    }
  }
  double lo = std::max(0, arg - 1) / static_cast<double>(count);
  double hi = std::min(count, arg + 1) / static_cast<double>(count);
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (seam_cost(s0, s1, a, b, m1) < seam_cost(s0, s1, a, b, m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return std::min(best, seam_cost(s0, s1, a, b, 0.5 * (lo + hi)));
}

// Uniform point in a convex polygon via a fan triangle chosen by area.
inline Point2 point_in_convex(Rng& rng, const std::vector<Point2>& poly) {
  std::vector<double> areas;
  double total = 0.0;
  for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
    const double a = 0.5 * std::abs(curvcert::orient(poly[0], poly[k], poly[k + 1]));
    areas.push_back(a);
    total += a;
  }
  double pick = rng.uniform(0.0, total);
  std::size_t k = 0;
  while (k + 1 < areas.size() && pick > areas[k]) pick -= areas[k++];
  double u = rng.uniform(), v = rng.uniform();
  if (u + v > 1.0) {
    u = 1.0 - u;
    v = 1.0 - v;
  }
  return poly[0] + u * (poly[k + 1] - poly[0]) + v * (poly[k + 2] - poly[0]);
}

// ---------------------------------------------------------------------------
// Test-side subembedding oracle. Places the chain by successive circle
// intersections (x_{i+1} is at distance r_{i+1} from x_1 and d(x_i, x_{i+1})
// from x_i, on a chosen side of the line x_1 x_i), scans a grid over the
// free diagonals for every side pattern, then zooms in around the best
// cells. Independent of the library's angle-based fan.
// ---------------------------------------------------------------------------

struct OracleValue {
  double C = 0.0;
  double best = 0.0;  // unclamped objective
};

namespace detail {

inline bool circle_step(Point2 xi, double ri, double c, double rnext, int side, Point2& out) {
  // Intersection of |p| = rnext and |p - xi| = c.
  if (ri <= 0.0) {
    if (std::abs(rnext - c) > 1e-9 * std::max(1.0, c)) return false;
    out = {rnext, 0.0};
    return true;
  }
  const double a = (ri * ri + rnext * rnext - c * c) / (2.0 * ri);
  double h2 = rnext * rnext - a * a;
  if (h2 < -1e-9 * std::max(1.0, rnext * rnext)) return false;
  h2 = std::max(0.0, h2);
  const Point2 e{xi.x / ri, xi.y / ri};
  const Point2 n{-e.y, e.x};
  out = a * e + (side * std::sqrt(h2)) * n;
  return true;
}

inline double evaluate(const std::vector<std::vector<double>>& d, const std::vector<double>& r,
                       unsigned sides) {
  const std::size_t n = d.size();
  std::vector<Point2> x(n);
  x[1] = {r[1], 0.0};
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const int side = (sides >> (i - 1)) & 1U ? -1 : 1;
    if (!circle_step(x[i], r[i], d[i][i + 1], r[i + 1], side, x[i + 1])) return INFINITY;
  }
  double worst = -INFINITY;
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) worst = std::max(worst, d[i][j] - curvcert::dist(x[i], x[j]));
  return worst;
}

}  // namespace detail

// Supports n = 3, 4, 5.
inline OracleValue grid_oracle(const std::vector<std::vector<double>>& d, int res = 241, int zooms = 6) {
  const std::size_t n = d.size();
  OracleValue out;
  if (n <= 3) return out;
  const unsigned patterns = 1U << (n - 2);
  // Box for the free diagonals r_2..r_{n-2} (0-based indices 2..n-2).
  std::vector<double> lo(n), hi(n);
  for (std::size_t i = 2; i + 1 < n; ++i) {
    lo[i] = d[0][i];
    double reach = 0.0;
    for (std::size_t k = 0; k < i; ++k) reach += d[k][k + 1];
    hi[i] = std::max(lo[i], reach);
  }
  const std::size_t free = n - 3;
  std::vector<double> r(n);
  r[1] = d[0][1];
  r[n - 1] = d[0][n - 1];
  double best = INFINITY;
  std::vector<double> arg(free);
  auto scan = [&](const std::vector<double>& a, const std::vector<double>& b, int m) {
    std::vector<int> idx(free, 0);
    while (true) {
      for (std::size_t k = 0; k < free; ++k)
        r[k + 2] = m == 1 ? a[k] : a[k] + (b[k] - a[k]) * idx[k] / (m - 1);
      for (unsigned s = 0; s < patterns; ++s) {
        const double v = detail::evaluate(d, r, s);
        if (v < best) {
          best = v;
          for (std::size_t k = 0; k < free; ++k) arg[k] = r[k + 2];
        }
      }
      std::size_t k = 0;
      while (k < free && ++idx[k] == m) idx[k++] = 0;
      if (k == free) break;
    }
  };
  std::vector<double> a(free), b(free);
  for (std::size_t k = 0; k < free; ++k) {
    a[k] = lo[k + 2];
    b[k] = hi[k + 2];
  }
  const int coarse = free == 1 ? res * 20 : res;
  scan(a, b, coarse);
  std::vector<double> step(free);
  for (std::size_t k = 0; k < free; ++k) step[k] = (b[k] - a[k]) / (coarse - 1);
  for (int z = 0; z < zooms; ++z) {
    for (std::size_t k = 0; k < free; ++k) {
      a[k] = std::max(lo[k + 2], arg[k] - 2.0 * step[k]);
      b[k] = std::min(hi[k + 2], arg[k] + 2.0 * step[k]);
      step[k] = (b[k] - a[k]) / 40.0;
    }
    scan(a, b, 41);
  }
  out.best = best;
  out.C = std::max(0.0, best);
  return out;
}

}  // namespace testgen
