#include "curvcert/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace curvcert {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorCode::Asymmetry: return "Asymmetry";
    case ErrorCode::TriangleViolation: return "TriangleViolation";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::InvalidEdge: return "InvalidEdge";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::TriangleInequalityViolation: return "TriangleInequalityViolation";
    case ErrorCode::LengthsShorterThanSide: return "LengthsShorterThanSide";
    case ErrorCode::RatioOutOfRange: return "RatioOutOfRange";
    case ErrorCode::NotHShort: return "NotHShort";
    case ErrorCode::ZeroBaseSegment: return "ZeroBaseSegment";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::FanTriangleInfeasible: return "FanTriangleInfeasible";
    case ErrorCode::ChainMismatch: return "ChainMismatch";
    case ErrorCode::TooManyOrderings: return "TooManyOrderings";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::HTooLarge: return "HTooLarge";
    case ErrorCode::BudgetZero: return "BudgetZero";
    case ErrorCode::NotConvex: return "NotConvex";
    case ErrorCode::PointOutsidePolygon: return "PointOutsidePolygon";
    case ErrorCode::SplitPathUnavailable: return "SplitPathUnavailable";
    case ErrorCode::NotFlatGluing: return "NotFlatGluing";
    case ErrorCode::InconsistentDescriptor: return "InconsistentDescriptor";
    case ErrorCode::GeneratorMismatch: return "GeneratorMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

std::vector<std::vector<double>> FiniteMetric::table() const {
  std::vector<std::vector<double>> out(n_, std::vector<double>(n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out[i][j] = dist_[i * n_ + j];
  return out;
}

void FiniteMetric::set_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != n_) {
    throw Error(ErrorCode::IndexOutOfRange, "label count does not match metric size");
  }
  labels_ = std::move(labels);
}

std::size_t FiniteMetric::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == name) return i;
  std::size_t pos = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(name, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != name.size() || value >= n_) {
    throw Error(ErrorCode::IndexOutOfRange, "unknown point '" + name + "'");
  }
  return static_cast<std::size_t>(value);
}

FiniteMetric FiniteMetric::scaled(double factor) const {
  FiniteMetric out = *this;
  for (double& d : out.dist_) d /= factor;
  return out;
}

FiniteMetric validate_metric(const std::vector<std::vector<double>>& matrix, double tol) {
  const std::size_t n = matrix.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) {
      throw Error(ErrorCode::NotSquare, "row " + std::to_string(i) + " has " +
                                            std::to_string(matrix[i].size()) +
                                            " entries, expected " + std::to_string(n),
                  {i});
    }
  }
  auto at = [&](std::size_t i, std::size_t j) { return matrix[i][j]; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!std::isfinite(at(i, j)))
        throw Error(ErrorCode::NonFinite, "entry (" + std::to_string(i) + "," +
                                              std::to_string(j) + ") is not finite",
                    {i, j});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (at(i, j) < 0.0)
        throw Error(ErrorCode::NegativeEntry, "entry (" + std::to_string(i) + "," +
                                                  std::to_string(j) + ") is negative",
                    {i, j});
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(at(i, i)) > tol)
      throw Error(ErrorCode::NonzeroDiagonal,
                  "diagonal entry " + std::to_string(i) + " is nonzero", {i});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(at(i, j) - at(j, i)) > tol)
        throw Error(ErrorCode::Asymmetry, "d(" + std::to_string(i) + "," +
                                              std::to_string(j) + ") != d(" +
                                              std::to_string(j) + "," + std::to_string(i) + ")",
                    {i, j});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j)
        if (at(i, k) > at(i, j) + at(j, k) + tol) {
          std::ostringstream msg;
          msg.precision(17);
          msg << "d(" << i << "," << k << ")=" << at(i, k) << " > d(" << i << "," << j
              << ")+d(" << j << "," << k << ")=" << at(i, j) + at(j, k);
          throw Error(ErrorCode::TriangleViolation, msg.str(), {i, k, j});
        }

  FiniteMetric m;
  m.n_ = n;
  m.dist_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.dist_[i * n + j] = i == j ? 0.0 : at(i, j);
  return m;
}

FiniteMetric trusted_metric(std::size_t n, std::vector<double> flat) {
  FiniteMetric m;
  m.n_ = n;
  m.dist_ = std::move(flat);
  return m;
}

MetricGraph::MetricGraph(GraphSpace g) : graph_(std::move(g)) {
  const std::size_t n = graph_.vertices;
  if (!graph_.coords.empty() && graph_.coords.size() != n) {
    throw Error(ErrorCode::InvalidEdge, "coordinate count does not match vertex count");
  }
  adjacency_.assign(n, {});
  for (const Edge& e : graph_.edges) {
    if (e.u >= n || e.v >= n) {
      throw Error(ErrorCode::IndexOutOfRange, "edge endpoint out of range", {e.u, e.v});
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorCode::InvalidEdge, "edge weights must be positive and finite", {e.u, e.v});
    }
    if (e.u == e.v) continue;
    adjacency_[e.u].emplace_back(e.v, e.weight);
    adjacency_[e.v].emplace_back(e.u, e.weight);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());

  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<double> dist(n * n, inf);
  pred_.assign(n * n, none);
  using Item = std::pair<double, std::size_t>;
  for (std::size_t s = 0; s < n; ++s) {
    double* row = &dist[s * n];
    std::size_t* pred = &pred_[s * n];
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    row[s] = 0.0;
    pred[s] = s;
    queue.emplace(0.0, s);
    while (!queue.empty()) {
      auto [du, u] = queue.top();
      queue.pop();
      if (du > row[u]) continue;
      for (auto [v, w] : adjacency_[u]) {
        const double cand = du + w;
        if (cand < row[v]) {
          row[v] = cand;
          pred[v] = u;
          queue.emplace(cand, v);
        }
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (row[v] == inf) {
        throw Error(ErrorCode::DisconnectedGraph,
                    "vertex " + std::to_string(v) + " unreachable from " + std::to_string(s),
                    {s, v});
      }
    }
  }
  // Rows are taken from the lower-index source so that the table is exactly
  // symmetric and geodesic(i, j) reproduces dist(i, j) bit for bit.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) dist[i * n + j] = dist[j * n + i];
  metric_ = trusted_metric(n, std::move(dist));
}

double MetricGraph::edge_weight(std::size_t u, std::size_t v) const {
  double best = std::numeric_limits<double>::infinity();
  for (auto [x, w] : adjacency_[u])
    if (x == v) best = std::min(best, w);
  if (!std::isfinite(best)) {
    throw Error(ErrorCode::InvalidEdge,
                "no edge between " + std::to_string(u) + " and " + std::to_string(v), {u, v});
  }
  return best;
}

double MetricGraph::distance(const GraphPoint& p, const GraphPoint& q) const {
  const FiniteMetric& d = metric_;
  if (p.is_vertex() && q.is_vertex()) return d(p.a, q.a);
  // Offsets to each end of the carrying edge.
  const double pa = p.t, pb = p.w - p.t;
  const double qa = q.t, qb = q.w - q.t;
  double best = std::min({pa + d(p.a, q.a) + qa, pa + d(p.a, q.b) + qb,
                          pb + d(p.b, q.a) + qa, pb + d(p.b, q.b) + qb});
  if (!p.is_vertex() && !q.is_vertex()) {
    if (p.a == q.a && p.b == q.b && p.w == q.w) best = std::min(best, std::abs(p.t - q.t));
    if (p.a == q.b && p.b == q.a && p.w == q.w) best = std::min(best, std::abs(p.t - (q.w - q.t)));
  }
  return best;
}

double MetricGraph::segment_length(const GraphPoint& p, const GraphPoint& q) const {
  if (!p.is_vertex() || !q.is_vertex()) {
    throw Error(ErrorCode::InvalidEdge, "graph polylines must run between vertices");
  }
  if (p.a == q.a) return 0.0;
  return edge_weight(p.a, q.a);
}

GraphPoint MetricGraph::interpolate(const GraphPoint& p, const GraphPoint& q,
                                    double offset) const {
  if (p.a == q.a) return p;
  const double w = edge_weight(p.a, q.a);
  if (offset <= 0.0) return GraphPoint::vertex(p.a);
  if (offset >= w) return GraphPoint::vertex(q.a);
  return {p.a, q.a, w, offset};
}

Polyline<GraphPoint> MetricGraph::geodesic(std::size_t i, std::size_t j) const {
  const std::size_t n = size();
  if (i >= n || j >= n) throw Error(ErrorCode::IndexOutOfRange, "geodesic endpoint", {i, j});
  const bool flip = j < i;
  const std::size_t s = flip ? j : i;
  const std::size_t t = flip ? i : j;
  std::vector<std::size_t> chain;
  for (std::size_t v = t; v != s; v = pred_[s * n + v]) chain.push_back(v);
  chain.push_back(s);
  std::reverse(chain.begin(), chain.end());
  // Accumulating edge weights in path order repeats Dijkstra's own sums.
  Polyline<GraphPoint> line;
  double acc = 0.0;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    if (k > 0) acc += edge_weight(chain[k - 1], chain[k]);
    line.points.push_back(GraphPoint::vertex(chain[k]));
    line.cumulative.push_back(acc);
  }
  return flip ? reversed(line) : line;
}

Polyline<GraphPoint> MetricGraph::geodesic(const GraphPoint& p, const GraphPoint& q) const {
  if (!p.is_vertex() || !q.is_vertex()) {
    throw Error(ErrorCode::InvalidEdge, "geodesics are computed between vertices");
  }
  return geodesic(p.a, q.a);
}

FiniteMetric path_metric(const GraphSpace& g) { return MetricGraph(g).metric(); }

Polyline<GraphPoint> geodesic(const GraphSpace& g, std::size_t i, std::size_t j) {
  return MetricGraph(g).geodesic(i, j);
}

bool TupleTable::has_repeats() const {
  return std::any_of(repeated.begin(), repeated.end(), [](bool r) { return r; });
}

TupleTable tuple_distances(const FiniteMetric& m, std::span<const std::size_t> indices) {
  TupleTable t;
  const std::size_t k = indices.size();
  t.indices.assign(indices.begin(), indices.end());
  t.dist.resize(k * k);
  t.repeated.assign(k, false);
  for (std::size_t a = 0; a < k; ++a) {
    if (indices[a] >= m.size()) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "index " + std::to_string(indices[a]) + " out of range", {indices[a]});
    }
    for (std::size_t b = 0; b < a; ++b)
      if (indices[b] == indices[a]) t.repeated[a] = true;
  }
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) t.dist[a * k + b] = m(indices[a], indices[b]);
  return t;
}

TupleTable tuple_from_table(const std::vector<std::vector<double>>& table) {
  FiniteMetric m = validate_metric(table, 1e-9);
  std::vector<std::size_t> idx(m.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return tuple_distances(m, idx);
}

}  // namespace curvcert
