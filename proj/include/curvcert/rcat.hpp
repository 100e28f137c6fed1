#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "curvcert/error.hpp"
#include "curvcert/plane.hpp"
#include "curvcert/polyline.hpp"

namespace curvcert {

// Threshold family H(x,y,z) = eps / (1 v d(x,y) v d(x,z) v d(y,z)).
// eps = 1 is the standard threshold; smaller eps gives the strengthened one.
struct HParams {
  double eps = 1.0;

  static HParams standard() { return {}; }
  static HParams strengthened(double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) {
      throw Error(ErrorCode::HypothesisViolated, "eps must lie in (0, 1]");
    }
    return {eps};
  }
};

double h_threshold(double d12, double d13, double d23, const HParams& params = {});

// A triangle with vertices x, y, z and sides xy, xz, yz, each a polyline
// from its first to its second named vertex.
template <class P>
struct ShortTriangle {
  P x, y, z;
  Polyline<P> xy, xz, yz;
  double h = 0.0;
};

struct SidePosition {
  TriangleSide side = TriangleSide::XY;
  double arc = 0.0;  // arc length from the side's first vertex
};

struct DefectReport {
  double defect = -std::numeric_limits<double>::infinity();  // sup d(u,v) - |u' - v'|
  SidePosition u, v;
  std::size_t samples = 0;  // cross-side pairs evaluated
  double C = 0.0;           // constant tested against
  bool pass = true;         // defect <= C + 1e-9
  std::array<std::size_t, 3> witness{};  // vertex indices, filled by space estimators
};

namespace detail {

template <class P>
const Polyline<P>& side_of(const ShortTriangle<P>& t, TriangleSide s) {
  switch (s) {
    case TriangleSide::XY: return t.xy;
    case TriangleSide::XZ: return t.xz;
    case TriangleSide::YZ: return t.yz;
  }
  return t.xy;
}

}  // namespace detail

// Sup of d(u, v) - |u' - v'| over u, v on different sides, sampled at
// `samples` + 1 arc-uniform positions per side (endpoints included).
template <LengthSpace S>
DefectReport rcat_triangle_defect(const S& space, const ShortTriangle<typename S::Point>& tri,
                                  std::size_t samples, const HParams& params = {}, double C = 0.0) {
  if (samples < 2) samples = 2;
  const double dxy = space.distance(tri.x, tri.y);
  const double dxz = space.distance(tri.x, tri.z);
  const double dyz = space.distance(tri.y, tri.z);
  const double limit = h_threshold(dxy, dxz, dyz, params);
  if (tri.h > limit + 1e-12) {
    throw Error(ErrorCode::HTooLarge, "h = " + std::to_string(tri.h) +
                                          " exceeds the threshold " + std::to_string(limit));
  }
  const ComparisonTriangle cmp = comparison_triangle(dxy, dxz, dyz);

  struct Sample {
    typename S::Point p;
    Point2 bar;
    SidePosition pos;
  };
  std::array<std::vector<Sample>, 3> sides;
  const std::array<TriangleSide, 3> kinds = {TriangleSide::XY, TriangleSide::XZ, TriangleSide::YZ};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& line = detail::side_of(tri, kinds[k]);
    const double len = line.length();
    for (double arc : uniform_arcs(len, samples)) {
      sides[k].push_back({point_at(space, line, arc),
                          comparison_point(cmp, kinds[k], arc, len - arc),
                          {kinds[k], arc}});
    }
  }

  DefectReport rep;
  rep.C = C;
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = a + 1; b < 3; ++b) {
      for (const Sample& su : sides[a]) {
        for (const Sample& sv : sides[b]) {
          const double val = space.distance(su.p, sv.p) - dist(su.bar, sv.bar);
          ++rep.samples;
          if (val > rep.defect) {
            rep.defect = val;
            rep.u = su.pos;
            rep.v = sv.pos;
          }
        }
      }
    }
  }
  rep.pass = rep.defect <= C + 1e-9;
  return rep;
}

// Triangle with geodesic (h = 0) sides between three points of the space.
template <LengthSpace S>
ShortTriangle<typename S::Point> geodesic_triangle(const S& space, const typename S::Point& x,
                                                   const typename S::Point& y,
                                                   const typename S::Point& z) {
  return {x, y, z, space.geodesic(x, y), space.geodesic(x, z), space.geodesic(y, z), 0.0};
}

// Spaces exposing a finite set of sites to build triangles from.
template <class S>
concept SiteSpace = LengthSpace<S> && requires(const S& s, std::size_t i) {
  { s.site_count() } -> std::convertible_to<std::size_t>;
  { s.site(i) } -> std::same_as<typename S::Point>;
};

// Max of the triangle defect over vertex triples with geodesic sides. When
// the number of triples exceeds `budget` a seeded random subset of that
// size is drawn; the witness triple is stored in the report.
template <SiteSpace S>
DefectReport rcat_space_defect(const S& space, std::size_t budget, const HParams& params = {},
                               std::size_t samples = 16, std::uint64_t seed = 0) {
  if (budget == 0) throw Error(ErrorCode::BudgetZero, "triangle budget must be positive");
  const std::size_t n = space.site_count();
  std::vector<std::array<std::size_t, 3>> triples;
  const double total = static_cast<double>(n) * static_cast<double>(n > 0 ? n - 1 : 0) *
                       static_cast<double>(n > 1 ? n - 2 : 0) / 6.0;
  if (total <= static_cast<double>(budget)) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) triples.push_back({i, j, k});
  } else {
    std::mt19937_64 rng(seed);
    while (triples.size() < budget) {
      std::array<std::size_t, 3> t = {rng() % n, rng() % n, rng() % n};
      if (t[0] == t[1] || t[0] == t[2] || t[1] == t[2]) continue;
      std::sort(t.begin(), t.end());
      triples.push_back(t);
    }
  }
  DefectReport best;
  best.samples = 0;
  for (const auto& t : triples) {
    const auto tri = geodesic_triangle(space, space.site(t[0]), space.site(t[1]), space.site(t[2]));
    DefectReport rep = rcat_triangle_defect(space, tri, samples, params);
    best.samples += rep.samples;
    if (rep.defect > best.defect) {
      const std::size_t count = best.samples;
      best = rep;
      best.samples = count;
      best.witness = t;
    }
  }
  return best;
}

}  // namespace curvcert
