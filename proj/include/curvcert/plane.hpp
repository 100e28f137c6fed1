#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "curvcert/error.hpp"
#include "curvcert/polyline.hpp"

namespace curvcert {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }
inline double dist2(Point2 a, Point2 b) { return dot(a - b, a - b); }
// Twice the signed area of (a, b, c); positive when counterclockwise.
inline double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }
inline Point2 lerp(Point2 a, Point2 b, double r) { return a + r * (b - a); }

// Angle at the vertex between sides `a` and `b` of a triangle whose third
// side `c` is opposite to it. Stable for needle-like triangles.
double included_angle(double a, double b, double c);

// The Euclidean plane as a length space: straight segments are geodesics.
struct EuclideanPlane {
  using Point = Point2;
  double distance(Point2 a, Point2 b) const { return dist(a, b); }
  double segment_length(Point2 a, Point2 b) const { return dist(a, b); }
  Point2 interpolate(Point2 a, Point2 b, double offset) const {
    const double l = dist(a, b);
    return l == 0.0 ? a : lerp(a, b, offset / l);
  }
  Polyline<Point2> geodesic(Point2 a, Point2 b) const {
    return {{a, b}, {0.0, dist(a, b)}};
  }
};

// Finite set of named sites in the plane; rcat estimators draw triangles from
// the sites and use straight sides.
struct PlanarSites : EuclideanPlane {
  std::vector<Point2> sites;
  std::size_t site_count() const { return sites.size(); }
  Point2 site(std::size_t i) const { return sites.at(i); }
};

enum class TriangleSide { XY, XZ, YZ };

// Comparison triangle in canonical pose: x at the origin, y on the
// nonnegative x-axis, z with nonnegative y.
struct ComparisonTriangle {
  Point2 x, y, z;
  double dxy = 0.0, dxz = 0.0, dyz = 0.0;

  std::array<Point2, 2> endpoints(TriangleSide side) const;
  double side_length(TriangleSide side) const;
};

ComparisonTriangle comparison_triangle(double dxy, double dxz, double dyz);

// Point on `side` at distance len_before * |side| / (len_before + len_after)
// from its first endpoint (x for XY and XZ, y for YZ).
Point2 comparison_point(const ComparisonTriangle& tri, TriangleSide side,
                        double len_before, double len_after);

struct ParallelogramResult {
  Point2 w;
  double lhs = 0.0;  // |x - w|^2, direct
  double rhs = 0.0;  // (1-r)|x-y|^2 + r|x-z|^2 - r(1-r)|y-z|^2
};

ParallelogramResult parallelogram_point(Point2 x, Point2 y, Point2 z, double r);

struct ProjectionReport {
  std::vector<double> arcs;        // sample positions along the polyline
  std::vector<Point2> projected;   // nearest point of [x, y] to each sample
  std::vector<double> deviation;   // distance from sample to its projection
  double max_deviation = 0.0;
  double bound = 0.0;              // 1/2 sqrt(2 l h + h^2)
  double base_length = 0.0;        // l = |x - y|
  double h = 0.0;
  // eps = h * max(1, l); when eps <= 1 the deviation also obeys sqrt(3 eps)/2.
  std::optional<double> eps;
  std::optional<double> eps_bound;
  bool endpoint_x_ok = true;  // |proj - x| <= |sample - x| everywhere
  bool endpoint_y_ok = true;
  bool bound_ok = true;
  bool eps_bound_ok = true;
  bool ok() const { return endpoint_x_ok && endpoint_y_ok && bound_ok && eps_bound_ok; }
};

// Projects an h-short planar polyline from x to y onto [x, y]. Samples are
// the polyline vertices plus `samples` arc-uniform positions.
ProjectionReport short_segment_projection(const std::vector<Point2>& path, Point2 x,
                                          Point2 y, double h, std::size_t samples = 64);

struct TwoTriangleInstance {
  Point2 x0, x1, x2;
  Point2 x0p, x1p, x2p;  // primed triangle
  Point2 u1, u2, u1p, u2p;
  double s = 0.0, t = 0.0;
  double eps = 1.0;
  double h = 0.0;
};

// Fills in h and the points u_i = x0 + s (x_i - x0) on both triangles and
// validates the hypotheses of the two-triangle comparison lemma.
TwoTriangleInstance make_two_triangle_instance(Point2 x0, Point2 x1, Point2 x2, Point2 x0p,
                                      Point2 x1p, Point2 x2p, double s, double t,
                                      double eps);

struct TwoTriangleResult {
  double d = 0.0;      // |u1 - u2| - |u1' - u2'|
  double bound = 0.0;  // sqrt(3 eps)
  bool pass = false;
  double expansion_gap = 0.0;  // worst disagreement of direct vs expanded squares
};

TwoTriangleResult two_triangle_check(const TwoTriangleInstance& inst);

}  // namespace curvcert
