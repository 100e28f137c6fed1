#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <vector>

#include "curvcert/error.hpp"

namespace curvcert {

// Ordered points of some space with cumulative arc length.
// cumulative.front() == 0 and cumulative.back() == length().
template <class P>
struct Polyline {
  std::vector<P> points;
  std::vector<double> cumulative;

  double length() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
  const P& front() const { return points.front(); }
  const P& back() const { return points.back(); }
  std::size_t segments() const { return points.empty() ? 0 : points.size() - 1; }
};

// A model of a length space: distances, elementary segments that polylines
// are built from, and a chosen geodesic between any two points.
template <class S>
concept LengthSpace = requires(const S& s, const typename S::Point& p,
                               double t) {
  { s.distance(p, p) } -> std::convertible_to<double>;
  { s.segment_length(p, p) } -> std::convertible_to<double>;
  { s.interpolate(p, p, t) } -> std::same_as<typename S::Point>;
  { s.geodesic(p, p) } -> std::same_as<Polyline<typename S::Point>>;
};

template <LengthSpace S>
Polyline<typename S::Point> make_polyline(const S& space,
                                          std::vector<typename S::Point> pts) {
  Polyline<typename S::Point> line;
  line.cumulative.reserve(pts.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) acc += space.segment_length(pts[i - 1], pts[i]);
    line.cumulative.push_back(acc);
  }
  line.points = std::move(pts);
  return line;
}

// Point at arc length `arc` from the start (clamped to [0, length]).
template <LengthSpace S>
typename S::Point point_at(const S& space,
                           const Polyline<typename S::Point>& line,
                           double arc) {
  if (line.points.empty()) {
    throw Error(ErrorCode::IndexOutOfRange, "empty polyline");
  }
  if (arc <= 0.0 || line.points.size() == 1) return line.points.front();
  if (arc >= line.length()) return line.points.back();
  auto it = std::upper_bound(line.cumulative.begin(), line.cumulative.end(), arc);
  std::size_t seg = static_cast<std::size_t>(it - line.cumulative.begin()) - 1;
  return space.interpolate(line.points[seg], line.points[seg + 1],
                           arc - line.cumulative[seg]);
}

template <class P>
Polyline<P> reversed(const Polyline<P>& line) {
  Polyline<P> out;
  out.points.assign(line.points.rbegin(), line.points.rend());
  const double total = line.length();
  out.cumulative.reserve(line.cumulative.size());
  for (auto it = line.cumulative.rbegin(); it != line.cumulative.rend(); ++it) {
    out.cumulative.push_back(total - *it);
  }
  return out;
}

// Joins two polylines sharing an endpoint (a.back() is b.front()).
template <class P>
Polyline<P> concatenate(const Polyline<P>& a, const Polyline<P>& b) {
  if (a.points.empty()) return b;
  if (b.points.empty()) return a;
  Polyline<P> out = a;
  const double base = a.length();
  for (std::size_t i = 1; i < b.points.size(); ++i) {
    out.points.push_back(b.points[i]);
    out.cumulative.push_back(base + b.cumulative[i]);
  }
  return out;
}

// Arc-length-uniform sample positions with both endpoints included.
inline std::vector<double> uniform_arcs(double length, std::size_t segments) {
  std::vector<double> arcs;
  if (segments == 0) segments = 1;
  arcs.reserve(segments + 1);
  for (std::size_t k = 0; k <= segments; ++k) {
    arcs.push_back(length * static_cast<double>(k) / static_cast<double>(segments));
  }
  return arcs;
}

}  // namespace curvcert
