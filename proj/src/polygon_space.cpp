#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "curvcert/gluing.hpp"

namespace curvcert {

namespace {

double bbox_scale(std::span<const Point2> poly) {
  double s = 0.0;
  for (const Point2& p : poly) s = std::max({s, std::abs(p.x), std::abs(p.y)});
  return std::max(1.0, s);
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return dist(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return dist(p, a + t * ab);
}

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d, double tol) {
  const double d1 = orient(c, d, a), d2 = orient(c, d, b);
  const double d3 = orient(a, b, c), d4 = orient(a, b, d);
  if (((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) &&
      ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol)))
    return true;
  return point_segment_distance(a, c, d) <= tol || point_segment_distance(b, c, d) <= tol ||
         point_segment_distance(c, a, b) <= tol || point_segment_distance(d, a, b) <= tol;
}

}  // namespace

double signed_area(std::span<const Point2> poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) a += cross(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * a;
}

bool is_convex_ccw(std::span<const Point2> poly, double tol) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  const double scale = bbox_scale(poly);
  if (signed_area(poly) < -tol * scale * scale) return false;
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = poly[(i + n - 1) % n], b = poly[i], c = poly[(i + 1) % n];
    const double la = norm(b - a), lc = norm(c - b);
    if (la == 0.0 || lc == 0.0) continue;
    const double turn = cross(b - a, c - b);
    if (turn < -tol * la * lc) return false;
    turning += std::atan2(std::max(turn, 0.0), dot(b - a, c - b));
  }
  // A convex boundary turns once; star-shaped windings turn more.
  return turning <= 2.0 * std::numbers::pi + 1e-6;
}

bool is_simple_polygon(std::span<const Point2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  const double tol = 1e-12 * bbox_scale(poly);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      const Point2 a = poly[i], b = poly[(i + 1) % n], c = poly[j], d = poly[(j + 1) % n];
      if (adjacent) {
        // Adjacent edges may only share their common vertex: reject folding back.
        const Point2 shared = j == i + 1 ? b : a;
        const Point2 p = j == i + 1 ? a : b;
        const Point2 q = j == i + 1 ? d : c;
        if (std::abs(cross(p - shared, q - shared)) <= tol * norm(p - shared) &&
            dot(p - shared, q - shared) > 0.0)
          return false;
        continue;
      }
      if (segments_intersect(a, b, c, d, tol)) return false;
    }
  }
  return true;
}

bool point_in_polygon(std::span<const Point2> poly, Point2 p, double tol) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i)
    if (point_segment_distance(p, poly[i], poly[(i + 1) % n]) <= tol) return true;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = poly[i], b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

bool segment_inside(std::span<const Point2> poly, Point2 a, Point2 b, double tol) {
  if (!point_in_polygon(poly, a, tol) || !point_in_polygon(poly, b, tol)) return false;
  const Point2 ab = b - a;
  const double len = norm(ab);
  if (len <= tol) return true;
  std::vector<double> cuts = {0.0, 1.0};
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 c = poly[i], d = poly[(i + 1) % n];
    const Point2 cd = d - c;
    const double denom = cross(ab, cd);
    if (std::abs(denom) > 1e-15 * len * norm(cd)) {
      const double t = cross(c - a, cd) / denom;
      const double s = cross(c - a, ab) / denom;
      if (s >= -1e-12 && s <= 1.0 + 1e-12 && t > 0.0 && t < 1.0) cuts.push_back(t);
    } else if (point_segment_distance(c, a, b) <= tol || point_segment_distance(d, a, b) <= tol) {
      for (Point2 e : {c, d}) {
        const double t = dot(e - a, ab) / (len * len);
        if (t > 0.0 && t < 1.0) cuts.push_back(t);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] - cuts[k] <= 1e-12) continue;
    const Point2 mid = a + (0.5 * (cuts[k] + cuts[k + 1])) * ab;
    if (!point_in_polygon(poly, mid, tol)) return false;
  }
  return true;
}

Polyline<Point2> intrinsic_polygon_geodesic(std::span<const Point2> poly_in, Point2 a, Point2 b) {
  std::vector<Point2> poly(poly_in.begin(), poly_in.end());
  if (poly.size() < 3) throw Error(ErrorCode::NotConvex, "polygon needs at least three vertices");
  if (signed_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());
  const double tol = 1e-9 * bbox_scale(poly);
  if (!point_in_polygon(poly, a, tol) || !point_in_polygon(poly, b, tol)) {
    throw Error(ErrorCode::PointOutsidePolygon, "point lies outside the polygon");
  }
  const EuclideanPlane plane;
  if (segment_inside(poly, a, b, tol)) return plane.geodesic(a, b);

  // Nodes: a, b, then the reflex vertices.
  std::vector<Point2> nodes = {a, b};
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = poly[(i + n - 1) % n], v = poly[i], q = poly[(i + 1) % n];
    if (cross(v - p, q - v) < 0.0) nodes.push_back(v);
  }
  const std::size_t m = nodes.size();
  std::vector<double> best(m, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> pred(m, m);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  best[0] = 0.0;
  heap.push({0.0, 0});
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > best[v]) continue;
    if (v == 1) break;
    for (std::size_t w = 0; w < m; ++w) {
      if (w == v) continue;
      const double nd = d + dist(nodes[v], nodes[w]);
      if (nd >= best[w]) continue;
      if (!segment_inside(poly, nodes[v], nodes[w], tol)) continue;
      best[w] = nd;
      pred[w] = v;
      heap.push({nd, w});
    }
  }
  if (!std::isfinite(best[1])) {
    throw Error(ErrorCode::PointOutsidePolygon, "no path inside the polygon");
  }
  std::vector<Point2> path;
  for (std::size_t v = 1; v != m; v = pred[v]) {
    path.push_back(nodes[v]);
  }
  std::reverse(path.begin(), path.end());
  return make_polyline(plane, path);
}

double intrinsic_polygon_distance(std::span<const Point2> poly, Point2 a, Point2 b) {
  return intrinsic_polygon_geodesic(poly, a, b).length();
}

PolygonSpace::PolygonSpace(std::vector<Point2> vertices) : poly_(std::move(vertices)) {
  if (poly_.size() < 3) throw Error(ErrorCode::NotConvex, "polygon needs at least three vertices");
  if (signed_area(poly_) < 0.0) std::reverse(poly_.begin(), poly_.end());
}

double PolygonSpace::distance(Point2 a, Point2 b) const {
  return intrinsic_polygon_distance(poly_, a, b);
}

Polyline<Point2> PolygonSpace::geodesic(Point2 a, Point2 b) const {
  return intrinsic_polygon_geodesic(poly_, a, b);
}

}  // namespace curvcert
