#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curvcert/error.hpp"
#include "curvcert/plane.hpp"
#include "curvcert/polyline.hpp"
#include "curvcert/rcat.hpp"
#include "curvcert/subembedding.hpp"

namespace curvcert {

inline constexpr double kConvexTolerance = 1e-9;

struct ConvexPolygon {
  std::vector<Point2> vertices;  // counterclockwise
};

// Validates a counterclockwise convex polygon (flat vertices allowed).
// Throws NotConvex.
ConvexPolygon make_convex_polygon(std::vector<Point2> vertices);

double signed_area(std::span<const Point2> poly);
bool is_convex_ccw(std::span<const Point2> poly, double tol = kConvexTolerance);
bool is_simple_polygon(std::span<const Point2> poly);
// Inside or on the boundary, with an absolute boundary tolerance.
bool point_in_polygon(std::span<const Point2> poly, Point2 p, double tol = 1e-9);
// Whether the closed segment [a, b] stays in the closed polygon.
bool segment_inside(std::span<const Point2> poly, Point2 a, Point2 b, double tol = 1e-9);

// Shortest path inside a simple polygon (visibility graph through reflex
// vertices). Throws PointOutsidePolygon.
Polyline<Point2> intrinsic_polygon_geodesic(std::span<const Point2> poly, Point2 a, Point2 b);
double intrinsic_polygon_distance(std::span<const Point2> poly, Point2 a, Point2 b);

// A simple polygon with its intrinsic (inner path) metric.
class PolygonSpace {
 public:
  using Point = Point2;

  explicit PolygonSpace(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const { return poly_; }
  double distance(Point2 a, Point2 b) const;
  double segment_length(Point2 a, Point2 b) const { return dist(a, b); }
  Point2 interpolate(Point2 a, Point2 b, double offset) const {
    return EuclideanPlane{}.interpolate(a, b, offset);
  }
  Polyline<Point2> geodesic(Point2 a, Point2 b) const;

  std::size_t site_count() const { return poly_.size(); }
  Point2 site(std::size_t i) const { return poly_.at(i); }

 private:
  std::vector<Point2> poly_;
};

// Two convex polygons laid flat on opposite sides of the segment S = [s0, s1]
// lying on the boundary of both; points of S are shared.
struct GluedPolygon {
  ConvexPolygon q1;
  ConvexPolygon q2;
  Point2 s0, s1;
};

// Throws NotFlatGluing when S is degenerate, not on both boundaries, or the
// polygons are not on opposite sides of its line.
GluedPolygon make_gluing(ConvexPolygon q1, ConvexPolygon q2, Point2 s0, Point2 s1);

struct GluedDistance {
  double distance = 0.0;
  Point2 seam;  // point of S realizing the distance
};

// Distance from a in q1 to b in q2: min over s in S of |a - s| + |s - b|.
GluedDistance glued_distance_witness(const GluedPolygon& g, Point2 a, Point2 b);
double glued_distance(const GluedPolygon& g, Point2 a, Point2 b);

struct GluedPoint {
  int piece = 1;  // 1 or 2
  Point2 p;
  friend bool operator==(const GluedPoint&, const GluedPoint&) = default;
};

// The glued polygon as a length space; geodesics across the seam bend once
// on S.
class GluedSpace {
 public:
  using Point = GluedPoint;

  explicit GluedSpace(GluedPolygon g, std::vector<GluedPoint> sites = {});

  const GluedPolygon& gluing() const { return g_; }
  bool on_seam(const GluedPoint& p) const;
  double distance(const GluedPoint& a, const GluedPoint& b) const;
  double segment_length(const GluedPoint& a, const GluedPoint& b) const { return dist(a.p, b.p); }
  GluedPoint interpolate(const GluedPoint& a, const GluedPoint& b, double offset) const;
  Polyline<GluedPoint> geodesic(const GluedPoint& a, const GluedPoint& b) const;

  std::size_t site_count() const { return sites_.size(); }
  GluedPoint site(std::size_t i) const { return sites_.at(i); }

 private:
  void check(const GluedPoint& p) const;
  GluedPolygon g_;
  std::vector<GluedPoint> sites_;
};

// Boundary of q1 union q2 as one counterclockwise polygon, starting at the
// first vertex after S on q1. Endpoints of S are always vertices; `hinges`
// are their positions. Throws NotFlatGluing when the union is not simple.
struct UnionPolygon {
  std::vector<Point2> vertices;
  std::size_t hinge_a = 0;
  std::size_t hinge_b = 0;
};
UnionPolygon union_polygon(const GluedPolygon& g);

struct ConvexificationRecord {
  bool already_convex = false;
  std::vector<Point2> input;       // glued polygon, counterclockwise
  std::optional<std::size_t> reflex_vertex;
  std::vector<Point2> reduced;     // convex polygon R without the re-inserted vertex
  std::vector<Point2> output;      // R with the flat vertex back, same indexing as input
  double side_error = 0.0;         // max | |w_{i-1} - w_i| - |v_{i-1} - v_i| |
  double arm_slack = 0.0;          // |w_prev - w_next| - |v_prev - v_next|
  double lipschitz_excess = 0.0;   // max d'(G y, G z) - |y - z| over sampled pairs
  double perimeter_error = 0.0;
};

// Convexifies a simple counterclockwise polygon whose only reflex vertices
// are among `hinges` by dropping one reflex hinge, re-embedding the rest
// in its intrinsic metric and re-inserting the hinge as a flat vertex.
ConvexificationRecord convexify_polygon(std::vector<Point2> poly, std::span<const std::size_t> hinges,
                                        std::size_t lipschitz_samples = 6);
ConvexificationRecord convexify(const GluedPolygon& g, std::size_t lipschitz_samples = 6);

struct EmbeddingLog {
  std::vector<ConvexificationRecord> convexifications;
};

// Convex polygon v_1..v_n (counterclockwise, v_1 at the origin, v_2 on the
// positive x-axis) built by splitting along u_1 u_{n-1}, embedding the
// pieces, gluing and convexifying. Depends only on the vertex distances
// (row-major n x n). Throws SplitPathUnavailable when d(u_1, u_k) = 0 for a
// required split.
std::vector<Point2> convex_embedding(std::span<const double> dist, std::size_t n,
                                     EmbeddingLog* log = nullptr);

// Constant-speed n-gon map F : Q -> P. Side i runs from vertex i to vertex
// i + 1 (cyclically) in both polygons; F sends the point at offset t from
// q[i] to the point at arc length speed[i] * t along sides[i].
template <class P>
struct NgonMapDescriptor {
  std::vector<Point2> q;
  std::vector<P> u;
  std::vector<Polyline<P>> sides;
  std::vector<double> speed;
  double h = 0.0;
};

template <class P>
struct NgonEmbedding {
  NgonMapDescriptor<P> map;
  double C_prime = 0.0;
  double C_n = 0.0;  // (n - 2) C'
  std::vector<ConvexificationRecord> convexifications;
  std::vector<std::size_t> kept;  // input vertex positions after collapsing repeats
};

namespace detail {

template <LengthSpace S>
std::vector<double> vertex_distances(const S& space, const std::vector<typename S::Point>& u) {
  const std::size_t n = u.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = space.distance(u[i], u[j]);
  return d;
}

}  // namespace detail

// Builds Q and the constant-speed map for the h-short polygon whose side i
// is sides[i] (from vertex i to vertex i + 1). Consecutive repeated vertices
// are collapsed first. Throws HTooLarge when h is not below every vertex
// threshold or a side is not h-short.
template <LengthSpace S>
NgonEmbedding<typename S::Point> build_ngon_embedding(const S& space,
                                                      std::vector<Polyline<typename S::Point>> sides,
                                                      double h, double C_prime,
                                                      const HParams& params = {}) {
  using P = typename S::Point;
  if (sides.size() < 3) throw Error(ErrorCode::InconsistentDescriptor, "need at least three sides");
  std::vector<P> u;
  for (const auto& s : sides) {
    if (s.points.empty()) throw Error(ErrorCode::InconsistentDescriptor, "empty side");
    u.push_back(s.front());
  }
  const std::vector<double> full = detail::vertex_distances(space, u);
  const std::size_t n0 = u.size();
  double scale = 0.0;
  for (double x : full) scale = std::max(scale, x);
  const double tol = 1e-12 * std::max(1.0, scale);

  for (std::size_t i = 0; i < n0; ++i) {
    const std::size_t j = (i + 1) % n0;
    if (space.distance(sides[i].back(), u[j]) > 1e-9 * std::max(1.0, scale)) {
      throw Error(ErrorCode::InconsistentDescriptor,
                  "side " + std::to_string(i) + " does not end at the next vertex", {i});
    }
    if (sides[i].length() > full[i * n0 + j] + h + 1e-9 * std::max(1.0, scale)) {
      throw Error(ErrorCode::HTooLarge, "side " + std::to_string(i) + " is not h-short", {i});
    }
  }

  // Collapse repeated consecutive vertices: the side leaving a kept vertex
  // absorbs the sides of the repeats that follow it.
  NgonEmbedding<P> out;
  std::vector<Polyline<P>> merged = {sides[0]};
  out.kept = {0};
  for (std::size_t i = 1; i < n0; ++i) {
    if (full[out.kept.back() * n0 + i] <= tol) {
      merged.back() = concatenate(merged.back(), sides[i]);
    } else {
      out.kept.push_back(i);
      merged.push_back(sides[i]);
    }
  }
  while (out.kept.size() > 1 && full[out.kept.back() * n0] <= tol) {
    merged[merged.size() - 2] = concatenate(merged[merged.size() - 2], merged.back());
    merged.pop_back();
    out.kept.pop_back();
  }

  std::vector<P> kept_u;
  for (const auto& s : merged) kept_u.push_back(s.front());
  const std::size_t n = kept_u.size();
  const std::vector<double> d = detail::vertex_distances(space, kept_u);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        if (h >= h_threshold(d[i * n + j], d[i * n + k], d[j * n + k], params) && h > 0.0) {
          throw Error(ErrorCode::HTooLarge, "h is not below the threshold of a vertex triple",
                      {i, j, k});
        }
      }

  EmbeddingLog log;
  std::vector<Point2> q;
  if (n >= 3) {
    q = convex_embedding(d, n, &log);
  } else {
    throw Error(ErrorCode::SplitPathUnavailable, "fewer than three distinct vertices");
  }
  out.map.q = std::move(q);
  out.map.u = kept_u;
  out.map.sides = std::move(merged);
  out.map.h = h;
  for (std::size_t i = 0; i < n; ++i) {
    const double side = dist(out.map.q[i], out.map.q[(i + 1) % n]);
    out.map.speed.push_back(side > 0.0 ? out.map.sides[i].length() / side : 1.0);
  }
  out.C_prime = C_prime;
  out.C_n = static_cast<double>(n - 2) * C_prime;
  out.convexifications = std::move(log.convexifications);
  return out;
}

// Geodesic (h = 0) polygon through the given vertices of the space.
template <LengthSpace S>
std::vector<Polyline<typename S::Point>> geodesic_sides(const S& space,
                                                        const std::vector<typename S::Point>& u) {
  std::vector<Polyline<typename S::Point>> sides;
  for (std::size_t i = 0; i < u.size(); ++i) sides.push_back(space.geodesic(u[i], u[(i + 1) % u.size()]));
  return sides;
}

struct AnReport {
  double vertex_error = 0.0;    // cond 1: max d(F(v_i), u_i)
  double side_error = 0.0;      // cond 2: max |d(u_i, u_{i+1}) - |v_i - v_{i+1}||
  double diagonal_slack = 0.0;  // cond 3: min |v_1 - v_i| - d(u_1, u_i)
  double length_slack = 0.0;    // cond 4: min len([F(x), v_i]) - |x - v_i|
  double distance_slack = 0.0;  // cond 5: min |x - y| + C_n - d(F(x), F(y))
  double C_n = 0.0;
  std::size_t samples = 0;      // boundary points
  bool convex = false;
  bool pass = false;
};

inline constexpr double kAnTolerance = 1e-6;

// Checks the five A_n conditions: 1-3 at the vertices, 4-5 on `samples`
// arc-uniform positions per side of Q (d' is Euclidean since Q is convex).
template <LengthSpace S>
AnReport verify_An(const S& space, const NgonMapDescriptor<typename S::Point>& F, double C_n,
                   std::size_t samples = 8) {
  using P = typename S::Point;
  const std::size_t n = F.q.size();
  if (n < 3 || F.u.size() != n || F.sides.size() != n || F.speed.size() != n) {
    throw Error(ErrorCode::InconsistentDescriptor, "descriptor sizes disagree");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(F.speed[i] > 0.0)) {
      throw Error(ErrorCode::InconsistentDescriptor, "speed must be positive", {i});
    }
    const double side = dist(F.q[i], F.q[(i + 1) % n]);
    if (std::abs(F.speed[i] * side - F.sides[i].length()) > 1e-9 * std::max(1.0, side)) {
      throw Error(ErrorCode::InconsistentDescriptor, "speed does not match the side lengths", {i});
    }
  }
  AnReport rep;
  rep.C_n = C_n;
  rep.diagonal_slack = std::numeric_limits<double>::infinity();
  rep.length_slack = std::numeric_limits<double>::infinity();
  rep.distance_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    rep.vertex_error = std::max(rep.vertex_error, space.distance(F.sides[i].front(), F.u[i]));
    rep.side_error = std::max(rep.side_error,
                              std::abs(space.distance(F.u[i], F.u[j]) - dist(F.q[i], F.q[j])));
    if (i > 0)
      rep.diagonal_slack =
          std::min(rep.diagonal_slack, dist(F.q[0], F.q[i]) - space.distance(F.u[0], F.u[i]));
  }

  struct Sample {
    Point2 x;
    P fx;
  };
  std::vector<Sample> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = F.q[i], b = F.q[(i + 1) % n];
    const double side = dist(a, b);
    const double len = F.sides[i].length();
    for (double t : uniform_arcs(side, std::max<std::size_t>(samples, 1))) {
      const Point2 x = side > 0.0 ? lerp(a, b, t / side) : a;
      const double arc = F.speed[i] * t;
      pts.push_back({x, point_at(space, F.sides[i], arc)});
      // cond 4 toward both endpoints of the side.
      rep.length_slack = std::min(rep.length_slack, arc - dist(x, a));
      rep.length_slack = std::min(rep.length_slack, (len - arc) - dist(x, b));
    }
  }
  rep.samples = pts.size();
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b)
      rep.distance_slack = std::min(rep.distance_slack, dist(pts[a].x, pts[b].x) + C_n -
                                                            space.distance(pts[a].fx, pts[b].fx));
  rep.convex = is_convex_ccw(F.q);
  rep.pass = rep.convex && rep.vertex_error <= kAnTolerance && rep.side_error <= kAnTolerance &&
             rep.diagonal_slack >= -kAnTolerance && rep.length_slack >= -kAnTolerance &&
             rep.distance_slack >= -kAnTolerance;
  return rep;
}

}  // namespace curvcert
