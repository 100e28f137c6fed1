#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvcert/experiments.hpp"
#include "curvcert/gluing.hpp"
#include "curvcert/metric.hpp"
#include "curvcert/rcat.hpp"
#include "curvcert/subembedding.hpp"

namespace curvcert {

using Json = nlohmann::json;

// Reads and parses a JSON file. Throws IoError when the file cannot be read
// and ParseError (with line and column) on malformed JSON.
Json load_json(const std::string& path);
void write_text(const std::string& path, const std::string& text);

// A metric document {"n", "dist", "labels"?} or a graph document
// {"vertices", "edges", "coords"?, "labels"?}; graphs carry their path metric.
struct SpaceDocument {
  FiniteMetric metric;
  std::optional<GraphSpace> graph;
};
SpaceDocument parse_space(const Json& doc, double tol = kMetricTolerance);

Json to_json(const FiniteMetric& m);
Json to_json(const GraphSpace& g);

// {"ordering", "C", "achieved", "pass", "points", "slacks": {"cond1", "cond2", "cond3"}}.
// `ordering` holds labels when the metric has them, indices otherwise.
Json certificate_to_json(const SubembeddingCertificate& cert, const FiniteMetric* metric = nullptr);
// Ordering (as metric indices), points and C of a certificate document.
struct CertificateDocument {
  std::vector<std::size_t> ordering;
  std::vector<Point2> points;
  double C = 0.0;
};
CertificateDocument parse_certificate(const Json& doc, const FiniteMetric& metric);

Point2 parse_point(const Json& v);
std::vector<Point2> parse_points(const Json& v);
Json to_json(Point2 p);
Json to_json(const std::vector<Point2>& pts);

// {"vertices": [[x, y], ...]} or a bare vertex list.
std::vector<Point2> parse_polygon(const Json& doc);
// {"q1": polygon, "q2": polygon, "s": [i, j]}: S runs between vertices i and
// j of q1.
GluedPolygon parse_gluing(const Json& doc);

Json to_json(const DefectReport& rep);
Json to_json(const ConvexificationRecord& rec);
Json to_json(const AnReport& rep);
Json to_json(const TrendReport& rep);
Json to_json(const SetDefect& set, const FiniteMetric& metric);

}  // namespace curvcert
