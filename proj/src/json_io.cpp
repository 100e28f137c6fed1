#include "curvcert/json_io.hpp"

#include <fstream>
#include <sstream>

namespace curvcert {

namespace {

const Json& require(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw Error(ErrorCode::ParseError, std::string("missing key '") + key + "'");
  }
  return doc.at(key);
}

double number(const Json& v, const char* what) {
  if (!v.is_number()) throw Error(ErrorCode::ParseError, std::string(what) + " must be a number");
  return v.get<double>();
}

std::size_t index(const Json& v, const char* what) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw Error(ErrorCode::ParseError, std::string(what) + " must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

std::vector<std::string> parse_labels(const Json& doc) {
  std::vector<std::string> labels;
  if (!doc.contains("labels")) return labels;
  const Json& l = doc.at("labels");
  if (!l.is_array()) throw Error(ErrorCode::ParseError, "labels must be an array");
  for (const Json& s : l) {
    if (!s.is_string()) throw Error(ErrorCode::ParseError, "labels must be strings");
    labels.push_back(s.get<std::string>());
  }
  return labels;
}

Json ordering_json(const std::vector<std::size_t>& ord, const FiniteMetric* metric) {
  Json out = Json::array();
  for (std::size_t i : ord) {
    if (metric && !metric->labels().empty()) out.push_back(metric->labels()[i]);
    else out.push_back(i);
  }
  return out;
}

const char* side_name(TriangleSide s) {
  switch (s) {
    case TriangleSide::XY: return "xy";
    case TriangleSide::XZ: return "xz";
    case TriangleSide::YZ: return "yz";
  }
  return "";
}

}  // namespace

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::ParseError,
                path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, path + ": cannot open file for writing");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, path + ": write failed");
}

SpaceDocument parse_space(const Json& doc, double tol) {
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "space document must be an object");
  SpaceDocument out;
  if (doc.contains("dist")) {
    const Json& d = doc.at("dist");
    if (!d.is_array()) throw Error(ErrorCode::ParseError, "dist must be an array of rows");
    std::vector<std::vector<double>> rows;
    for (const Json& row : d) {
      if (!row.is_array()) throw Error(ErrorCode::ParseError, "dist must be an array of rows");
      std::vector<double> r;
      for (const Json& x : row) r.push_back(number(x, "distance"));
      rows.push_back(std::move(r));
    }
    if (doc.contains("n") && index(doc.at("n"), "n") != rows.size()) {
      throw Error(ErrorCode::NotSquare, "n does not match the number of rows");
    }
    out.metric = validate_metric(rows, tol);
  } else if (doc.contains("vertices") && doc.contains("edges")) {
    GraphSpace g;
    g.vertices = index(doc.at("vertices"), "vertices");
    const Json& edges = doc.at("edges");
    if (!edges.is_array()) throw Error(ErrorCode::ParseError, "edges must be an array");
    for (const Json& e : edges) {
      if (!e.is_array() || e.size() != 3) throw Error(ErrorCode::ParseError, "edge must be [u, v, w]");
      g.edges.push_back({index(e[0], "edge endpoint"), index(e[1], "edge endpoint"), number(e[2], "edge weight")});
    }
    if (doc.contains("coords")) {
      for (const Json& c : doc.at("coords")) {
        const Point2 p = parse_point(c);
        g.coords.push_back({p.x, p.y});
      }
    }
    out.metric = path_metric(g);
    out.graph = std::move(g);
  } else {
    throw Error(ErrorCode::ParseError, "expected a metric {n, dist} or a graph {vertices, edges}");
  }
  out.metric.set_labels(parse_labels(doc));
  return out;
}

Json to_json(const FiniteMetric& m) {
  Json out;
  out["n"] = m.size();
  out["dist"] = m.table();
  if (!m.labels().empty()) out["labels"] = m.labels();
  return out;
}

Json to_json(const GraphSpace& g) {
  Json out;
  out["vertices"] = g.vertices;
  out["edges"] = Json::array();
  for (const Edge& e : g.edges) out["edges"].push_back({e.u, e.v, e.weight});
  if (!g.coords.empty()) {
    out["coords"] = Json::array();
    for (const Coord2& c : g.coords) out["coords"].push_back({c.x, c.y});
  }
  return out;
}

Json certificate_to_json(const SubembeddingCertificate& cert, const FiniteMetric* metric) {
  Json out;
  out["ordering"] = ordering_json(cert.ordering, metric);
  out["C"] = cert.C;
  out["achieved"] = cert.achieved;
  out["pass"] = cert.pass;
  out["points"] = to_json(cert.config.points);
  out["folds"] = cert.config.folds;
  Json slacks;
  slacks["cond1"] = cert.cond1;
  slacks["cond2"] = cert.cond2;
  slacks["cond3"] = Json::array();
  for (const PairSlack& p : cert.cond3) slacks["cond3"].push_back({p.i, p.j, p.slack});
  out["slacks"] = std::move(slacks);
  return out;
}

CertificateDocument parse_certificate(const Json& doc, const FiniteMetric& metric) {
  CertificateDocument out;
  const Json& ord = require(doc, "ordering");
  if (!ord.is_array()) throw Error(ErrorCode::ParseError, "ordering must be an array");
  for (const Json& v : ord) {
    if (v.is_string()) out.ordering.push_back(metric.index_of(v.get<std::string>()));
    else {
      const std::size_t i = index(v, "ordering entry");
      if (i >= metric.size()) throw Error(ErrorCode::IndexOutOfRange, "ordering entry out of range", {i});
      out.ordering.push_back(i);
    }
  }
  out.points = parse_points(require(doc, "points"));
  if (out.points.size() != out.ordering.size()) {
    throw Error(ErrorCode::ParseError, "points and ordering differ in length");
  }
  out.C = number(require(doc, "C"), "C");
  return out;
}

Point2 parse_point(const Json& v) {
  if (!v.is_array() || v.size() != 2) throw Error(ErrorCode::ParseError, "point must be [x, y]");
  return {number(v[0], "coordinate"), number(v[1], "coordinate")};
}

std::vector<Point2> parse_points(const Json& v) {
  if (!v.is_array()) throw Error(ErrorCode::ParseError, "expected an array of points");
  std::vector<Point2> out;
  for (const Json& p : v) out.push_back(parse_point(p));
  return out;
}

Json to_json(Point2 p) { return Json::array({p.x, p.y}); }

Json to_json(const std::vector<Point2>& pts) {
  Json out = Json::array();
  for (Point2 p : pts) out.push_back(to_json(p));
  return out;
}

std::vector<Point2> parse_polygon(const Json& doc) {
  return parse_points(doc.is_object() ? require(doc, "vertices") : doc);
}

GluedPolygon parse_gluing(const Json& doc) {
  std::vector<Point2> q1 = parse_polygon(require(doc, "q1"));
  std::vector<Point2> q2 = parse_polygon(require(doc, "q2"));
  const Json& s = require(doc, "s");
  if (!s.is_array() || s.size() != 2) throw Error(ErrorCode::ParseError, "s must be [i, j]");
  const std::size_t i = index(s[0], "s"), j = index(s[1], "s");
  if (i >= q1.size() || j >= q1.size()) throw Error(ErrorCode::IndexOutOfRange, "s indexes q1's vertices", {i, j});
  const Point2 s0 = q1[i], s1 = q1[j];
  return make_gluing(make_convex_polygon(std::move(q1)), make_convex_polygon(std::move(q2)), s0, s1);
}

Json to_json(const DefectReport& rep) {
  Json out;
  out["defect"] = rep.defect;
  out["C"] = rep.C;
  out["pass"] = rep.pass;
  out["samples"] = rep.samples;
  out["witness"] = rep.witness;
  out["u"] = {{"side", side_name(rep.u.side)}, {"arc", rep.u.arc}};
  out["v"] = {{"side", side_name(rep.v.side)}, {"arc", rep.v.arc}};
  return out;
}

Json to_json(const ConvexificationRecord& rec) {
  Json out;
  out["already_convex"] = rec.already_convex;
  out["input"] = to_json(rec.input);
  out["reflex_vertex"] = rec.reflex_vertex ? Json(*rec.reflex_vertex) : Json(nullptr);
  out["reduced"] = to_json(rec.reduced);
  out["output"] = to_json(rec.output);
  out["side_error"] = rec.side_error;
  out["arm_slack"] = rec.arm_slack;
  out["lipschitz_excess"] = rec.lipschitz_excess;
  out["perimeter_error"] = rec.perimeter_error;
  return out;
}

Json to_json(const AnReport& rep) {
  Json out;
  out["vertex_error"] = rep.vertex_error;
  out["side_error"] = rep.side_error;
  out["diagonal_slack"] = rep.diagonal_slack;
  out["length_slack"] = rep.length_slack;
  out["distance_slack"] = rep.distance_slack;
  out["C_n"] = rep.C_n;
  out["samples"] = rep.samples;
  out["convex"] = rep.convex;
  out["pass"] = rep.pass;
  return out;
}

Json to_json(const TrendReport& rep) {
  Json out;
  out["family"] = rep.family;
  out["rows"] = Json::array();
  for (const TrendRow& r : rep.rows) {
    Json row;
    row["m"] = r.m;
    row["defect5"] = r.defect5;
    row["rcat_defect"] = r.rcat_defect ? Json(*r.rcat_defect) : Json(nullptr);
    row["bound"] = r.bound;
    row["forward_ok"] = r.forward_ok;
    row["declared_ok"] = r.declared_ok ? Json(*r.declared_ok) : Json(nullptr);
    out["rows"].push_back(std::move(row));
  }
  out["strictly_decreasing"] = rep.strictly_decreasing;
  out["nonincreasing"] = rep.nonincreasing;
  out["ratios"] = rep.ratios;
  out["decay"] = rep.decay;
  return out;
}

Json to_json(const SetDefect& set, const FiniteMetric& metric) {
  Json out;
  out["C"] = set.C;
  out["worst_ordering"] = ordering_json(set.worst_ordering, &metric);
  out["orderings_checked"] = set.orderings_checked;
  out["certificate"] = certificate_to_json(set.cert, &metric);
  return out;
}

}  // namespace curvcert
