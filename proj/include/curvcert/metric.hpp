#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curvcert/error.hpp"
#include "curvcert/polyline.hpp"

namespace curvcert {

inline constexpr double kMetricTolerance = 1e-12;

// A validated finite metric space, stored as a dense row-major table.
class FiniteMetric {
 public:
  FiniteMetric() = default;

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
  std::vector<std::vector<double>> table() const;

  const std::vector<std::string>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> labels);
  // Index of a label, or of a decimal index string when no labels are set.
  std::size_t index_of(const std::string& name) const;

  // Divides every distance by `factor`.
  FiniteMetric scaled(double factor) const;

 private:
  friend FiniteMetric validate_metric(const std::vector<std::vector<double>>&, double);
  friend FiniteMetric trusted_metric(std::size_t, std::vector<double>);
  std::size_t n_ = 0;
  std::vector<double> dist_;
  std::vector<std::string> labels_;
};

// Checks the metric axioms in the order: shape, finiteness, sign, diagonal,
// symmetry, triangle inequality. The first failure is reported; a triangle
// violation d(i,k) > d(i,j) + d(j,k) carries indices {i, k, j}.
FiniteMetric validate_metric(const std::vector<std::vector<double>>& matrix,
                             double tol = kMetricTolerance);

// Wraps a table produced by library code that guarantees the axioms.
FiniteMetric trusted_metric(std::size_t n, std::vector<double> flat);

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 0.0;
};

struct Coord2 {
  double x = 0.0;
  double y = 0.0;
};

// Weighted graph standing in for a length space.
struct GraphSpace {
  std::size_t vertices = 0;
  std::vector<Edge> edges;
  std::vector<Coord2> coords;  // empty or one per vertex
};

// Point of the metric graph: at distance `t` from `a` along edge (a, b) of
// length `w`. Vertices are encoded as {a, a, 0, 0}.
struct GraphPoint {
  std::size_t a = 0;
  std::size_t b = 0;
  double w = 0.0;
  double t = 0.0;

  static GraphPoint vertex(std::size_t v) { return {v, v, 0.0, 0.0}; }
  bool is_vertex() const { return a == b || t == 0.0; }
  friend bool operator==(const GraphPoint&, const GraphPoint&) = default;
};

// All-pairs shortest paths of a connected GraphSpace plus the metric graph
// (1-complex) it spans. Geodesics are shortest edge paths; among equal
// lengths the path found first by Dijkstra with (distance, vertex) ordering
// is kept, which makes them deterministic.
class MetricGraph {
 public:
  using Point = GraphPoint;

  explicit MetricGraph(GraphSpace g);

  const GraphSpace& graph() const { return graph_; }
  const FiniteMetric& metric() const { return metric_; }
  std::size_t size() const { return graph_.vertices; }

  double distance(const GraphPoint& p, const GraphPoint& q) const;
  double segment_length(const GraphPoint& p, const GraphPoint& q) const;
  GraphPoint interpolate(const GraphPoint& p, const GraphPoint& q, double offset) const;
  Polyline<GraphPoint> geodesic(const GraphPoint& p, const GraphPoint& q) const;
  Polyline<GraphPoint> geodesic(std::size_t i, std::size_t j) const;

  std::size_t site_count() const { return size(); }
  GraphPoint site(std::size_t i) const { return GraphPoint::vertex(i); }

 private:
  double edge_weight(std::size_t u, std::size_t v) const;

  GraphSpace graph_;
  FiniteMetric metric_;
  std::vector<std::size_t> pred_;  // pred_[s * n + v]: predecessor of v from s
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency_;
};

// Shortest-path metric of a connected graph (throws DisconnectedGraph).
FiniteMetric path_metric(const GraphSpace& g);

// Convenience: geodesic between vertices i and j of g.
Polyline<GraphPoint> geodesic(const GraphSpace& g, std::size_t i, std::size_t j);

struct TupleTable {
  std::vector<std::size_t> indices;
  std::vector<double> dist;  // k x k, row-major
  std::vector<bool> repeated;  // repeated[a]: indices[a] equals an earlier entry

  std::size_t size() const { return indices.size(); }
  double operator()(std::size_t a, std::size_t b) const { return dist[a * size() + b]; }
  bool has_repeats() const;
};

TupleTable tuple_distances(const FiniteMetric& m, std::span<const std::size_t> indices);

// Builds a tuple table directly from a k x k distance table (no index data).
TupleTable tuple_from_table(const std::vector<std::vector<double>>& table);

}  // namespace curvcert
