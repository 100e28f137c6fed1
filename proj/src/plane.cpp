#include "curvcert/plane.hpp"

#include <algorithm>
#include <numbers>

namespace curvcert {

namespace {
constexpr double kSideTol = 1e-9;
}

double included_angle(double a, double b, double c) {
  if (a < b) std::swap(a, b);
  if (b <= 0.0) return 0.0;
  double mu;
  if (b >= c && c >= 0.0) {
    mu = c - (a - b);
  } else {
    mu = b - (a - c);
  }
  const double num = ((a - b) + c) * mu;
  const double den = (a + (b + c)) * ((a - c) + b);
  if (den <= 0.0) return std::numbers::pi;
  if (num <= 0.0) return 0.0;
  return 2.0 * std::atan(std::sqrt(num / den));
}

std::array<Point2, 2> ComparisonTriangle::endpoints(TriangleSide side) const {
  switch (side) {
    case TriangleSide::XY: return {x, y};
    case TriangleSide::XZ: return {x, z};
    case TriangleSide::YZ: return {y, z};
  }
  return {x, y};
}

double ComparisonTriangle::side_length(TriangleSide side) const {
  switch (side) {
    case TriangleSide::XY: return dxy;
    case TriangleSide::XZ: return dxz;
    case TriangleSide::YZ: return dyz;
  }
  return dxy;
}

ComparisonTriangle comparison_triangle(double dxy, double dxz, double dyz) {
  for (double d : {dxy, dxz, dyz}) {
    if (!std::isfinite(d) || d < 0.0) {
      throw Error(ErrorCode::TriangleInequalityViolation, "side lengths must be finite and >= 0");
    }
  }
  const double scale = std::max({1.0, dxy, dxz, dyz});
  if (dxy > dxz + dyz + kSideTol * scale || dxz > dxy + dyz + kSideTol * scale ||
      dyz > dxy + dxz + kSideTol * scale) {
    throw Error(ErrorCode::TriangleInequalityViolation, "side lengths violate the triangle inequality");
  }
  ComparisonTriangle tri;
  tri.dxy = dxy;
  tri.dxz = dxz;
  tri.dyz = dyz;
  tri.x = {0.0, 0.0};
  tri.y = {dxy, 0.0};
  if (dxy == 0.0) {
    tri.z = {dxz, 0.0};
  } else {
    const double angle = included_angle(dxy, dxz, dyz);
    tri.z = {dxz * std::cos(angle), dxz * std::sin(angle)};
    if (tri.z.y < 0.0) tri.z.y = 0.0;
  }
  return tri;
}

Point2 comparison_point(const ComparisonTriangle& tri, TriangleSide side,
                        double len_before, double len_after) {
  if (!(len_before >= 0.0) || !(len_after >= 0.0)) {
    throw Error(ErrorCode::LengthsShorterThanSide, "sub-path lengths must be nonnegative");
  }
  const double side_len = tri.side_length(side);
  const double total = len_before + len_after;
  if (total + kSideTol * std::max(1.0, side_len) < side_len) {
    throw Error(ErrorCode::LengthsShorterThanSide,
                "sub-path lengths sum to less than the side length");
  }
  const auto [p, q] = tri.endpoints(side);
  if (total <= 0.0 || side_len <= 0.0) return p;
  const double along = std::min(side_len, len_before * side_len / total);
  return lerp(p, q, along / side_len);
}

ParallelogramResult parallelogram_point(Point2 x, Point2 y, Point2 z, double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw Error(ErrorCode::RatioOutOfRange, "ratio must lie in [0, 1]");
  }
  ParallelogramResult out;
  out.w = y + r * (z - y);
  out.lhs = dist2(x, out.w);
  out.rhs = (1.0 - r) * dist2(x, y) + r * dist2(x, z) - r * (1.0 - r) * dist2(y, z);
  return out;
}

namespace {

Point2 project_to_segment(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return a;
  const double r = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return a + r * ab;
}

}  // namespace

ProjectionReport short_segment_projection(const std::vector<Point2>& path, Point2 x,
                                          Point2 y, double h, std::size_t samples) {
  if (path.size() < 2) throw Error(ErrorCode::NotHShort, "path needs at least two points");
  const double l = dist(x, y);
  if (l <= 0.0) throw Error(ErrorCode::ZeroBaseSegment, "|x - y| must be positive");
  if (!(h >= 0.0)) throw Error(ErrorCode::NotHShort, "h must be nonnegative");
  if (dist(path.front(), x) > kSideTol || dist(path.back(), y) > kSideTol) {
    throw Error(ErrorCode::NotHShort, "path must run from x to y");
  }
  const EuclideanPlane plane;
  const Polyline<Point2> line = make_polyline(plane, path);
  const double slack = 1e-12 * std::max(1.0, l);
  if (line.length() > l + h + slack) {
    throw Error(ErrorCode::NotHShort, "path is longer than |x - y| + h");
  }

  ProjectionReport rep;
  rep.base_length = l;
  rep.h = h;
  rep.bound = 0.5 * std::sqrt(2.0 * l * h + h * h);
  const double eps = h * std::max(1.0, l);
  if (eps <= 1.0) {
    rep.eps = eps;
    rep.eps_bound = std::sqrt(3.0 * eps) / 2.0;
  }

  std::vector<double> arcs = line.cumulative;
  for (double a : uniform_arcs(line.length(), samples)) arcs.push_back(a);
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  for (double arc : arcs) {
    const Point2 g = point_at(plane, line, arc);
    const Point2 lam = project_to_segment(g, x, y);
    const double dev = dist(g, lam);
    rep.arcs.push_back(arc);
    rep.projected.push_back(lam);
    rep.deviation.push_back(dev);
    rep.max_deviation = std::max(rep.max_deviation, dev);
    if (dist(lam, x) > dist(g, x) + 1e-12) rep.endpoint_x_ok = false;
    if (dist(lam, y) > dist(g, y) + 1e-12) rep.endpoint_y_ok = false;
  }
  rep.bound_ok = rep.max_deviation <= rep.bound + 1e-12;
  if (rep.eps_bound) rep.eps_bound_ok = rep.max_deviation <= *rep.eps_bound + 1e-12;
  return rep;
}

namespace {

void check_two_triangle_hypotheses(const TwoTriangleInstance& in) {
  auto fail = [](const std::string& which) {
    throw Error(ErrorCode::HypothesisViolated, which);
  };
  if (!(in.eps > 0.0 && in.eps <= 1.0)) fail("eps must lie in (0, 1]");
  if (!(in.s >= 0.0 && in.s <= 1.0 && in.t >= 0.0 && in.t <= 1.0)) fail("ratios must lie in [0, 1]");
  const double r1p = dist(in.x0p, in.x1p), r2p = dist(in.x0p, in.x2p);
  const double h = in.eps / std::max({1.0, r1p, r2p});
  if (std::abs(h - in.h) > kSideTol) fail("h does not match eps / (1 v |x0'-x1'| v |x0'-x2'|)");
  if (std::abs(dist(in.x1, in.x2) - dist(in.x1p, in.x2p)) > kSideTol) fail("|x1-x2| != |x1'-x2'|");
  const std::array<double, 2> r = {dist(in.x0, in.x1), dist(in.x0, in.x2)};
  const std::array<double, 2> rp = {r1p, r2p};
  for (int i = 0; i < 2; ++i) {
    if (r[i] < rp[i] - kSideTol) fail("|x0'-xi'| <= |x0-xi| fails");
    if (r[i] > rp[i] + h + kSideTol) fail("|x0-xi| <= |x0'-xi'| + h fails");
  }
  const std::array<Point2, 2> u = {in.u1, in.u2}, up = {in.u1p, in.u2p};
  const std::array<Point2, 2> xs = {in.x1, in.x2}, xps = {in.x1p, in.x2p};
  const std::array<double, 2> ratio = {in.s, in.t};
  for (int i = 0; i < 2; ++i) {
    if (dist(u[i], lerp(in.x0, xs[i], ratio[i])) > kSideTol ||
        dist(up[i], lerp(in.x0p, xps[i], ratio[i])) > kSideTol) {
      fail("u_i is not at the stated ratio along [x0, x_i]");
    }
  }
}

// |u1 - u2|^2 from side lengths when u1, u2 sit at ratios s <= t along the
// sides from x0 to x1 and x0 to x2.
double expanded_square(double s, double t, double d12sq, double d01sq, double d02sq) {
  if (s > t) {
    std::swap(s, t);
    std::swap(d01sq, d02sq);
  }
  if (t == 0.0) return 0.0;
  return s * t * d12sq + t * t * (1.0 - s / t) * d02sq - s * t * (1.0 - s / t) * d01sq;
}

}  // namespace

TwoTriangleInstance make_two_triangle_instance(Point2 x0, Point2 x1, Point2 x2, Point2 x0p,
                                      Point2 x1p, Point2 x2p, double s, double t,
                                      double eps) {
  TwoTriangleInstance in;
  in.x0 = x0;
  in.x1 = x1;
  in.x2 = x2;
  in.x0p = x0p;
  in.x1p = x1p;
  in.x2p = x2p;
  in.s = s;
  in.t = t;
  in.eps = eps;
  in.h = eps / std::max({1.0, dist(x0p, x1p), dist(x0p, x2p)});
  in.u1 = lerp(x0, x1, s);
  in.u2 = lerp(x0, x2, t);
  in.u1p = lerp(x0p, x1p, s);
  in.u2p = lerp(x0p, x2p, t);
  check_two_triangle_hypotheses(in);
  return in;
}

TwoTriangleResult two_triangle_check(const TwoTriangleInstance& in) {
  check_two_triangle_hypotheses(in);
  TwoTriangleResult res;
  const double direct = dist(in.u1, in.u2);
  const double direct_p = dist(in.u1p, in.u2p);
  res.d = direct - direct_p;
  res.bound = std::sqrt(3.0 * in.eps);
  res.pass = res.d <= res.bound + 1e-9;
  const double e = expanded_square(in.s, in.t, dist2(in.x1, in.x2), dist2(in.x0, in.x1),
                                   dist2(in.x0, in.x2));
  const double ep = expanded_square(in.s, in.t, dist2(in.x1p, in.x2p), dist2(in.x0p, in.x1p),
                                    dist2(in.x0p, in.x2p));
  res.expansion_gap = std::max(std::abs(e - direct * direct), std::abs(ep - direct_p * direct_p));
  return res;
}

}  // namespace curvcert
