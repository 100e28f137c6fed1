#include "curvcert/gluing.hpp"

#include <algorithm>
#include <cmath>

namespace curvcert {

namespace {

double polygon_scale(std::span<const Point2> poly) {
  double s = 1.0;
  for (const Point2& p : poly) s = std::max({s, std::abs(p.x), std::abs(p.y)});
  return s;
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return dist(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return dist(p, a + t * ab);
}

bool on_boundary_edge(std::span<const Point2> poly, Point2 s0, Point2 s1, double tol) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = poly[i], b = poly[(i + 1) % n];
    if (point_segment_distance(s0, a, b) <= tol && point_segment_distance(s1, a, b) <= tol) return true;
  }
  return false;
}

// Inserts p as a vertex (if it is not one already) and returns its index.
std::size_t insert_vertex(std::vector<Point2>& poly, Point2 p, double tol) {
  for (std::size_t i = 0; i < poly.size(); ++i)
    if (dist(poly[i], p) <= tol) {
      poly[i] = p;
      return i;
    }
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (point_segment_distance(p, poly[i], poly[(i + 1) % poly.size()]) <= tol) {
      poly.insert(poly.begin() + static_cast<std::ptrdiff_t>(i + 1), p);
      return i + 1;
    }
  }
  throw Error(ErrorCode::NotFlatGluing, "seam endpoint is not on the polygon boundary");
}

std::vector<Point2> rotated(const std::vector<Point2>& poly, std::size_t start) {
  std::vector<Point2> out;
  for (std::size_t k = 0; k < poly.size(); ++k) out.push_back(poly[(start + k) % poly.size()]);
  return out;
}

// Rigid motion taking poly[0] to the origin and poly[1] onto the positive x-axis.
void normalize_pose(std::vector<Point2>& poly) {
  if (poly.size() < 2) return;
  const Point2 o = poly[0];
  const Point2 e = poly[1] - o;
  const double len = norm(e);
  const double c = len > 0.0 ? e.x / len : 1.0, s = len > 0.0 ? e.y / len : 0.0;
  for (Point2& p : poly) {
    const Point2 q = p - o;
    p = {c * q.x + s * q.y, -s * q.x + c * q.y};
  }
  poly[0] = {0.0, 0.0};
  poly[1].y = 0.0;
}

bool is_reflex(std::span<const Point2> poly, std::size_t i) {
  const std::size_t n = poly.size();
  const Point2 a = poly[(i + n - 1) % n], b = poly[i], c = poly[(i + 1) % n];
  return cross(b - a, c - b) < -kConvexTolerance * norm(b - a) * norm(c - b);
}

ConvexificationRecord convexify_impl(std::vector<Point2> poly, std::span<const std::size_t> hinges,
                                     std::size_t samples, EmbeddingLog* log) {
  ConvexificationRecord rec;
  rec.input = poly;
  const std::size_t n = poly.size();
  if (is_convex_ccw(poly)) {
    rec.already_convex = true;
    rec.output = poly;
    rec.reduced = poly;
    return rec;
  }
  std::optional<std::size_t> drop;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_reflex(poly, i)) continue;
    if (std::find(hinges.begin(), hinges.end(), i) == hinges.end()) {
      throw Error(ErrorCode::NotFlatGluing, "reflex vertex away from the seam", {i});
    }
    if (!drop) drop = i;
  }
  if (!drop) throw Error(ErrorCode::NotFlatGluing, "polygon is not convex but has no reflex hinge");
  if (n <= 3) throw Error(ErrorCode::NotFlatGluing, "a triangle cannot have a reflex vertex");
  const std::size_t j = *drop;
  rec.reflex_vertex = j;

  const PolygonSpace space(poly);
  std::vector<std::size_t> kept;
  for (std::size_t k = 1; k < n; ++k) kept.push_back((j + k) % n);
  const std::size_t m = kept.size();
  std::vector<double> d(m * m, 0.0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      d[a * m + b] = d[b * m + a] = space.distance(poly[kept[a]], poly[kept[b]]);
  rec.reduced = convex_embedding(d, m, log);

  const Point2 w_prev = rec.reduced[m - 1], w_next = rec.reduced[0];
  const double along = dist(poly[kept[m - 1]], poly[j]);
  const double span = dist(w_prev, w_next);
  const Point2 w_j = span > 0.0 ? w_prev + (along / span) * (w_next - w_prev) : w_prev;
  rec.output.assign(n, Point2{});
  for (std::size_t a = 0; a < m; ++a) rec.output[kept[a]] = rec.reduced[a];
  rec.output[j] = w_j;

  double perimeter_in = 0.0, perimeter_out = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lin = dist(poly[i], poly[(i + 1) % n]);
    const double lout = dist(rec.output[i], rec.output[(i + 1) % n]);
    perimeter_in += lin;
    perimeter_out += lout;
    rec.side_error = std::max(rec.side_error, std::abs(lin - lout));
  }
  rec.perimeter_error = std::abs(perimeter_in - perimeter_out);
  rec.arm_slack = span - dist(poly[kept[m - 1]], poly[kept[0]]);

  // G sends the point at offset t on side i of the output to the point at
  // the same offset on side i of the input.
  std::vector<std::pair<Point2, Point2>> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = rec.output[i], b = rec.output[(i + 1) % n];
    const Point2 ga = poly[i], gb = poly[(i + 1) % n];
    const double len = dist(a, b), glen = dist(ga, gb);
    for (double t : uniform_arcs(len, std::max<std::size_t>(samples, 1))) {
      const Point2 y = len > 0.0 ? lerp(a, b, t / len) : a;
      const Point2 gy = glen > 0.0 ? lerp(ga, gb, std::min(t, glen) / glen) : ga;
      pts.push_back({y, gy});
    }
  }
  rec.lipschitz_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b)
      rec.lipschitz_excess =
          std::max(rec.lipschitz_excess,
                   space.distance(pts[a].second, pts[b].second) - dist(pts[a].first, pts[b].first));
  return rec;
}

}  // namespace

ConvexPolygon make_convex_polygon(std::vector<Point2> vertices) {
  if (vertices.size() < 3) throw Error(ErrorCode::NotConvex, "polygon needs at least three vertices");
  for (const Point2& p : vertices)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw Error(ErrorCode::NotConvex, "vertex coordinates must be finite");
  if (signed_area(vertices) <= 0.0) {
    throw Error(ErrorCode::NotConvex, "vertices must be listed counterclockwise");
  }
  if (!is_convex_ccw(vertices) || !is_simple_polygon(vertices)) {
    throw Error(ErrorCode::NotConvex, "polygon is not convex");
  }
  return {std::move(vertices)};
}

GluedPolygon make_gluing(ConvexPolygon q1, ConvexPolygon q2, Point2 s0, Point2 s1) {
  const double tol = 1e-9 * std::max(polygon_scale(q1.vertices), polygon_scale(q2.vertices));
  if (dist(s0, s1) <= tol) throw Error(ErrorCode::NotFlatGluing, "seam has zero length");
  if (!on_boundary_edge(q1.vertices, s0, s1, tol) || !on_boundary_edge(q2.vertices, s0, s1, tol)) {
    throw Error(ErrorCode::NotFlatGluing, "seam must lie on a side of both polygons");
  }
  auto side = [&](const ConvexPolygon& q) {
    double lo = 0.0, hi = 0.0;
    for (const Point2& p : q.vertices) {
      const double o = orient(s0, s1, p) / dist(s0, s1);
      lo = std::min(lo, o);
      hi = std::max(hi, o);
    }
    if (lo < -tol && hi > tol) return 0;
    return hi > tol ? 1 : -1;
  };
  const int a = side(q1), b = side(q2);
  if (a == 0 || b == 0 || a == b) {
    throw Error(ErrorCode::NotFlatGluing, "polygons must lie on opposite sides of the seam");
  }
  return {std::move(q1), std::move(q2), s0, s1};
}

GluedDistance glued_distance_witness(const GluedPolygon& g, Point2 a, Point2 b) {
  const double tol = 1e-9 * std::max(polygon_scale(g.q1.vertices), polygon_scale(g.q2.vertices));
  if (!point_in_polygon(g.q1.vertices, a, tol)) {
    throw Error(ErrorCode::PointOutsidePolygon, "first point is not in the first polygon");
  }
  if (!point_in_polygon(g.q2.vertices, b, tol)) {
    throw Error(ErrorCode::PointOutsidePolygon, "second point is not in the second polygon");
  }
  const Point2 e = g.s1 - g.s0;
  const double len2 = dot(e, e);
  const double da = cross(e, a - g.s0);
  double db = cross(e, b - g.s0);
  Point2 bb = b;
  if (da * db > 0.0) {
    // Same open side (cannot happen for a flat gluing); reflect b.
    bb = b - (2.0 * db / len2) * Point2{-e.y, e.x};
    db = -db;
  }
  double t;
  if (da == db) {
    const double ta = dot(a - g.s0, e) / len2, tb = dot(bb - g.s0, e) / len2;
    t = 0.5 * (ta + tb);
  } else {
    const double lambda = da / (da - db);
    t = dot(a + lambda * (bb - a) - g.s0, e) / len2;
  }
  t = std::clamp(t, 0.0, 1.0);
  const Point2 s = g.s0 + t * e;
  return {dist(a, s) + dist(s, b), s};
}

double glued_distance(const GluedPolygon& g, Point2 a, Point2 b) {
  return glued_distance_witness(g, a, b).distance;
}

GluedSpace::GluedSpace(GluedPolygon g, std::vector<GluedPoint> sites)
    : g_(std::move(g)), sites_(std::move(sites)) {
  for (const auto& p : sites_) check(p);
}

void GluedSpace::check(const GluedPoint& p) const {
  const double tol = 1e-9 * std::max(polygon_scale(g_.q1.vertices), polygon_scale(g_.q2.vertices));
  if (p.piece != 1 && p.piece != 2) throw Error(ErrorCode::PointOutsidePolygon, "piece must be 1 or 2");
  const auto& poly = p.piece == 1 ? g_.q1.vertices : g_.q2.vertices;
  if (!point_in_polygon(poly, p.p, tol)) {
    throw Error(ErrorCode::PointOutsidePolygon, "point is not in its piece");
  }
}

bool GluedSpace::on_seam(const GluedPoint& p) const {
  const double tol = 1e-12 * std::max(polygon_scale(g_.q1.vertices), polygon_scale(g_.q2.vertices));
  return point_segment_distance(p.p, g_.s0, g_.s1) <= tol;
}

double GluedSpace::distance(const GluedPoint& a, const GluedPoint& b) const {
  if (a.piece == b.piece || on_seam(a) || on_seam(b)) return dist(a.p, b.p);
  return a.piece == 1 ? glued_distance(g_, a.p, b.p) : glued_distance(g_, b.p, a.p);
}

GluedPoint GluedSpace::interpolate(const GluedPoint& a, const GluedPoint& b, double offset) const {
  const double l = dist(a.p, b.p);
  const Point2 p = l == 0.0 ? a.p : lerp(a.p, b.p, offset / l);
  return {on_seam(a) ? b.piece : a.piece, p};
}

Polyline<GluedPoint> GluedSpace::geodesic(const GluedPoint& a, const GluedPoint& b) const {
  if (a.piece == b.piece || on_seam(a) || on_seam(b)) return make_polyline(*this, {a, b});
  const GluedDistance w =
      a.piece == 1 ? glued_distance_witness(g_, a.p, b.p) : glued_distance_witness(g_, b.p, a.p);
  return make_polyline(*this, {a, GluedPoint{a.piece, w.seam}, b});
}

UnionPolygon union_polygon(const GluedPolygon& g) {
  const double tol = 1e-9 * std::max(polygon_scale(g.q1.vertices), polygon_scale(g.q2.vertices));
  std::vector<Point2> p1 = g.q1.vertices, p2 = g.q2.vertices;
  insert_vertex(p1, g.s0, tol);
  insert_vertex(p1, g.s1, tol);
  insert_vertex(p2, g.s0, tol);
  insert_vertex(p2, g.s1, tol);
  auto index_of = [&](const std::vector<Point2>& poly, Point2 p) {
    for (std::size_t i = 0; i < poly.size(); ++i)
      if (dist(poly[i], p) <= tol) return i;
    return poly.size();
  };
  const std::size_t n1 = p1.size(), n2 = p2.size();
  const std::size_t a0 = index_of(p1, g.s0), a1 = index_of(p1, g.s1);
  // Orient S along q1's boundary: q1 runs from `from` to `to` along the seam.
  std::size_t from, to;
  if ((a0 + 1) % n1 == a1) {
    from = a0;
    to = a1;
  } else if ((a1 + 1) % n1 == a0) {
    from = a1;
    to = a0;
  } else {
    throw Error(ErrorCode::NotFlatGluing, "seam is not a single side of the first polygon");
  }
  const Point2 p_from = p1[from], p_to = p1[to];
  const std::size_t b_to = index_of(p2, p_to), b_from = index_of(p2, p_from);
  if ((b_to + 1) % n2 != b_from) {
    throw Error(ErrorCode::NotFlatGluing, "seam is not a single side of the second polygon");
  }
  UnionPolygon out;
  out.vertices = rotated(p1, to);  // p_to ... p_from
  for (std::size_t k = 1; k + 1 < n2; ++k) out.vertices.push_back(p2[(b_from + k) % n2]);
  out.hinge_a = 0;
  out.hinge_b = n1 - 1;
  if (!is_simple_polygon(out.vertices)) {
    throw Error(ErrorCode::NotFlatGluing, "the glued polygons do not form a simple polygon");
  }
  return out;
}

ConvexificationRecord convexify_polygon(std::vector<Point2> poly, std::span<const std::size_t> hinges,
                                        std::size_t lipschitz_samples) {
  return convexify_impl(std::move(poly), hinges, lipschitz_samples, nullptr);
}

ConvexificationRecord convexify(const GluedPolygon& g, std::size_t lipschitz_samples) {
  const UnionPolygon u = union_polygon(g);
  const std::array<std::size_t, 2> hinges = {u.hinge_a, u.hinge_b};
  return convexify_impl(u.vertices, hinges, lipschitz_samples, nullptr);
}

std::vector<Point2> convex_embedding(std::span<const double> d, std::size_t n, EmbeddingLog* log) {
  if (n < 3 || d.size() != n * n) {
    throw Error(ErrorCode::InconsistentDescriptor, "distance table must be n x n with n >= 3");
  }
  double scale = 0.0;
  for (double x : d) scale = std::max(scale, x);
  if (n == 3) {
    const ComparisonTriangle t = comparison_triangle(d[1], d[2], d[5]);
    return {t.x, t.y, t.z};
  }
  const std::size_t k = n - 1;
  std::vector<double> sub(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) sub[i * k + j] = d[i * n + j];
  std::vector<Point2> q = convex_embedding(sub, k, log);

  const double L = d[k - 1];
  if (L <= 1e-12 * std::max(1.0, scale)) {
    throw Error(ErrorCode::SplitPathUnavailable,
                "first vertex coincides with vertex " + std::to_string(k) + "; cannot split", {0, k - 1});
  }
  const Point2 v1 = q[0], vk = q[k - 1];
  const double base = dist(v1, vk);
  const Point2 e = (1.0 / base) * (vk - v1);
  const Point2 left = {-e.y, e.x};
  const double a = d[k], b = d[(k - 1) * n + k];
  const double theta = included_angle(L, a, b);
  q.push_back(v1 + (a * std::cos(theta)) * e + (a * std::sin(theta)) * left);

  if (!is_convex_ccw(q)) {
    const std::array<std::size_t, 2> hinges = {0, k - 1};
    ConvexificationRecord rec = convexify_impl(q, hinges, 4, log);
    q = rec.output;
    if (log) log->convexifications.push_back(std::move(rec));
  }
  normalize_pose(q);
  return q;
}

}  // namespace curvcert
