#include "curvcert/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "curvcert/experiments.hpp"
#include "curvcert/gluing.hpp"
#include "curvcert/json_io.hpp"
#include "curvcert/rcat.hpp"
#include "curvcert/subembedding.hpp"

namespace curvcert::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

Point2 parse_xy(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw Error(ErrorCode::ParseError, "expected x,y but got '" + s + "'");
  try {
    std::size_t p0 = 0, p1 = 0;
    const double x = std::stod(parts[0], &p0), y = std::stod(parts[1], &p1);
    if (p0 != parts[0].size() || p1 != parts[1].size()) throw std::invalid_argument(s);
    return {x, y};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::ParseError, "expected x,y but got '" + s + "'");
  }
}

std::vector<std::size_t> parse_order(const FiniteMetric& m, const std::string& s) {
  std::vector<std::size_t> out;
  for (const std::string& name : split(s, ',')) out.push_back(m.index_of(name));
  if (out.empty()) throw Error(ErrorCode::ParseError, "empty point list");
  return out;
}

void emit(const RunConfig& c, const Json& doc, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (c.out_path.empty()) out << text;
  else write_text(c.out_path, text);
}

// Piece of the glued polygon containing p; `prefer` is tried first.
GluedPoint locate(const GluedPolygon& g, Point2 p, int prefer) {
  const auto& first = prefer == 1 ? g.q1.vertices : g.q2.vertices;
  const auto& second = prefer == 1 ? g.q2.vertices : g.q1.vertices;
  if (point_in_polygon(first, p)) return {prefer, p};
  if (point_in_polygon(second, p)) return {3 - prefer, p};
  throw Error(ErrorCode::PointOutsidePolygon, "point lies in neither polygon");
}

SearchOptions search_options(const RunConfig& c) {
  SearchOptions s;
  s.seed = c.seed;
  s.restarts = c.restarts;
  return s;
}

SetOptions set_options(const RunConfig& c) {
  SetOptions s;
  s.search = search_options(c);
  if (c.orderings > 0) s.sample_orderings = c.orderings;
  return s;
}

int metric_validate(const RunConfig& c, std::ostream& out) {
  const SpaceDocument doc = parse_space(load_json(c.in_path), c.tol);
  Json rep;
  rep["valid"] = true;
  rep["kind"] = doc.graph ? "graph" : "metric";
  rep["n"] = doc.metric.size();
  rep["tolerance"] = c.tol;
  emit(c, rep, out);
  return kPass;
}

int subembed_defect(const RunConfig& c, std::ostream& out) {
  const SpaceDocument doc = parse_space(load_json(c.in_path), c.tol);
  const auto order = parse_order(doc.metric, c.order);
  Json rep;
  double C = 0.0;
  if (c.set_level) {
    const SetDefect set = minimal_defect_set(doc.metric, order, set_options(c));
    C = set.C;
    rep = to_json(set, doc.metric);
  } else {
    const OrderedDefect res = minimal_defect_ordered(tuple_distances(doc.metric, order), search_options(c));
    C = res.C;
    rep = certificate_to_json(res.cert, &doc.metric);
  }
  rep["seed"] = c.seed;
  emit(c, rep, out);
  return c.C && C > *c.C + kSlackTolerance ? kConditionFailed : kPass;
}

int subembed_check(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const SpaceDocument doc = parse_space(load_json(c.in_path), c.tol);
  const CertificateDocument cert = parse_certificate(load_json(c.cert_path), doc.metric);
  const double C = c.C.value_or(cert.C);
  const TupleTable tuple = tuple_distances(doc.metric, cert.ordering);
  SubembeddingCertificate checked;
  try {
    checked = subembedding_slack(tuple, chain_config(cert.points), C);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ChainMismatch) throw;
    err << e.what() << "\n";
    return kConditionFailed;
  }
  emit(c, certificate_to_json(checked, &doc.metric), out);
  return checked.pass ? kPass : kConditionFailed;
}

int npoint(const RunConfig& c, std::ostream& out) {
  const SpaceDocument doc = parse_space(load_json(c.in_path), c.tol);
  const std::size_t N = doc.metric.size();
  if (c.n < 3 || c.n > N) throw Error(ErrorCode::IndexOutOfRange, "n must lie in [3, number of points]");
  if (c.budget == 0) throw Error(ErrorCode::BudgetZero, "subset budget must be positive");
  double total = 1.0;
  for (std::size_t k = 0; k < c.n; ++k) total = total * static_cast<double>(N - k) / static_cast<double>(k + 1);
  std::vector<std::vector<std::size_t>> subsets;
  const bool exhaustive = total <= static_cast<double>(c.budget);
  if (exhaustive) {
    std::vector<std::size_t> idx(c.n);
    for (std::size_t k = 0; k < c.n; ++k) idx[k] = k;
    while (true) {
      subsets.push_back(idx);
      std::size_t k = c.n;
      while (k > 0 && idx[k - 1] == N - c.n + k - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t j = k; j < c.n; ++j) idx[j] = idx[j - 1] + 1;
    }
  } else {
    subsets = sample_tuples(N, c.budget, c.seed, c.n);
  }
  SetDefect worst;
  bool have = false;
  for (const auto& s : subsets) {
    SetDefect d = minimal_defect_set(doc.metric, s, set_options(c));
    if (!have || d.C > worst.C) {
      worst = std::move(d);
      have = true;
    }
  }
  Json rep;
  rep["n"] = c.n;
  rep["C"] = worst.C;
  rep["subsets_checked"] = subsets.size();
  rep["exhaustive"] = exhaustive;
  rep["seed"] = c.seed;
  rep["worst"] = to_json(worst, doc.metric);
  const bool pass = !c.C || worst.C <= *c.C + kSlackTolerance;
  if (c.C) {
    rep["tested_C"] = *c.C;
    rep["pass"] = pass;
  }
  emit(c, rep, out);
  return pass ? kPass : kConditionFailed;
}

int rcat_defect(const RunConfig& c, std::ostream& out) {
  SpaceDocument doc = parse_space(load_json(c.in_path), c.tol);
  if (!doc.graph) {
    // A bare metric becomes the complete graph with its distances as weights,
    // whose path metric is the same metric.
    GraphSpace g;
    g.vertices = doc.metric.size();
    for (std::size_t i = 0; i < g.vertices; ++i)
      for (std::size_t j = i + 1; j < g.vertices; ++j) g.edges.push_back({i, j, doc.metric(i, j)});
    doc.graph = std::move(g);
  }
  const MetricGraph space(*doc.graph);
  const HParams params = c.eps == 1.0 ? HParams::standard() : HParams::strengthened(c.eps);
  DefectReport rep = rcat_space_defect(space, c.budget, params, std::max<std::size_t>(c.samples, 2), c.seed);
  rep.C = c.C.value_or(0.0);
  rep.pass = rep.defect <= rep.C + 1e-9;
  Json j = to_json(rep);
  j["eps"] = c.eps;
  j["budget"] = c.budget;
  j["seed"] = c.seed;
  emit(c, j, out);
  return !c.C || rep.pass ? kPass : kConditionFailed;
}

int glue_dist(const RunConfig& c, std::ostream& out) {
  const GluedPolygon g = parse_gluing(load_json(c.in_path));
  const GluedSpace space(g);
  const GluedPoint a = locate(g, parse_xy(c.point_a), 1);
  const GluedPoint b = locate(g, parse_xy(c.point_b), 2);
  Json rep;
  rep["distance"] = space.distance(a, b);
  rep["a_piece"] = a.piece;
  rep["b_piece"] = b.piece;
  if (a.piece != b.piece) {
    const GluedDistance w = a.piece == 1 ? glued_distance_witness(g, a.p, b.p) : glued_distance_witness(g, b.p, a.p);
    rep["seam"] = to_json(w.seam);
  } else {
    rep["seam"] = nullptr;
  }
  emit(c, rep, out);
  return kPass;
}

template <LengthSpace S>
int build_in(const RunConfig& c, const S& space, const std::vector<typename S::Point>& u, std::ostream& out) {
  const auto emb = build_ngon_embedding(space, geodesic_sides(space, u), c.h, c.C_prime);
  const AnReport an = verify_An(space, emb.map, emb.C_n, std::max<std::size_t>(c.samples, 2));
  const std::size_t n = emb.map.u.size();
  std::vector<std::vector<double>> table(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i][j] = space.distance(emb.map.u[i], emb.map.u[j]);
  TupleTable tuple = tuple_from_table(table);
  tuple.indices = emb.kept;
  const SubembeddingCertificate cert = subembedding_slack(tuple, chain_config(emb.map.q), emb.C_n);
  Json rep;
  rep["q"] = to_json(emb.map.q);
  rep["speed"] = emb.map.speed;
  rep["kept"] = emb.kept;
  rep["h"] = c.h;
  rep["C_prime"] = emb.C_prime;
  rep["C_n"] = emb.C_n;
  rep["convexifications"] = Json::array();
  for (const auto& r : emb.convexifications) rep["convexifications"].push_back(to_json(r));
  rep["an_report"] = to_json(an);
  rep["certificate"] = certificate_to_json(cert);
  emit(c, rep, out);
  return an.pass && cert.pass ? kPass : kConditionFailed;
}

int glue_build(const RunConfig& c, std::ostream& out) {
  const std::vector<Point2> verts = parse_polygon(load_json(c.in_path));
  if (c.gluing_path.empty()) return build_in(c, EuclideanPlane{}, verts, out);
  const GluedPolygon g = parse_gluing(load_json(c.gluing_path));
  std::vector<GluedPoint> u;
  for (Point2 p : verts) u.push_back(locate(g, p, 1));
  return build_in(c, GluedSpace(g), u, out);
}

int glue_convexify(const RunConfig& c, std::ostream& out) {
  const GluedPolygon g = parse_gluing(load_json(c.in_path));
  const ConvexificationRecord rec = convexify(g, std::max<std::size_t>(c.samples, 2));
  emit(c, to_json(rec), out);
  const bool ok = rec.side_error <= 1e-6 && rec.arm_slack >= -1e-9 && rec.lipschitz_excess <= 1e-6 &&
                  rec.perimeter_error <= 1e-9;
  return ok ? kPass : kConditionFailed;
}

SpaceSequence sequence_from_config(const Json& cfg, std::uint64_t seed) {
  if (!cfg.contains("family") || !cfg.at("family").is_string()) {
    throw Error(ErrorCode::ParseError, "experiment config needs a string 'family'");
  }
  const std::string family = cfg.at("family").get<std::string>();
  auto get = [&](const char* key, double fallback) {
    if (!cfg.contains(key)) return fallback;
    if (!cfg.at(key).is_number()) throw Error(ErrorCode::ParseError, std::string(key) + " must be a number");
    return cfg.at(key).get<double>();
  };
  SpaceSequence seq;
  if (family == "square_net") {
    std::vector<double> spacings = {0.2, 0.1, 0.05};
    if (cfg.contains("spacings")) spacings = cfg.at("spacings").get<std::vector<double>>();
    seq = square_net_sequence(spacings, get("radius", 0.3));
  } else if (family == "tree") {
    seq = tree_sequence(static_cast<std::size_t>(get("vertices", 30)), static_cast<std::size_t>(get("count", 3)), seed);
  } else if (family == "cycle") {
    seq = cycle_sequence(get("circumference", 4.0), static_cast<std::size_t>(get("vertices", 16)),
                         static_cast<std::size_t>(get("count", 3)));
  } else {
    throw Error(ErrorCode::GeneratorMismatch, "unknown family '" + family + "'");
  }
  if (cfg.contains("scale_factors")) {
    seq = scaled_sequence(seq.spaces.front(), cfg.at("scale_factors").get<std::vector<double>>(),
                          family + "_scaled");
  }
  return seq;
}

int limit_trend(const RunConfig& c, std::ostream& out) {
  const Json cfg = load_json(c.in_path);
  const std::uint64_t seed = cfg.contains("seed") ? cfg.at("seed").get<std::uint64_t>() : c.seed;
  const SpaceSequence seq = sequence_from_config(cfg, seed);
  TrendOptions opt;
  opt.tuples = cfg.value("tuples", std::size_t{20});
  opt.rcat_budget = cfg.value("rcat_budget", std::size_t{0});
  opt.rcat_samples = cfg.value("rcat_samples", std::size_t{8});
  opt.seed = seed;
  opt.set = set_options(c);
  opt.set.search.seed = seed;
  const TrendReport rep = defect_trend(seq, opt);
  Json j = to_json(rep);
  j["seed"] = seed;
  emit(c, j, out);
  if (!c.csv_path.empty()) write_text(c.csv_path, trend_csv(rep));
  bool ok = true;
  for (const TrendRow& r : rep.rows) ok = ok && r.forward_ok && r.declared_ok.value_or(true);
  return ok ? kPass : kConditionFailed;
}

}  // namespace

double default_tolerance() {
  if (const char* env = std::getenv("CURVCERT_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v > 0.0) return v;
  }
  return kMetricTolerance;
}

std::optional<int> parse_args(const std::vector<std::string>& args, RunConfig& c, std::ostream& out,
                              std::ostream& err) {
  CLI::App app{"Certify rough CAT(0) and n-point conditions of finite metric models", "curvcert"};
  app.require_subcommand(1);
  c.tol = default_tolerance();

  auto common = [&](CLI::App* s) {
    s->add_option("--tol", c.tol, "metric axiom tolerance (default $CURVCERT_TOL or 1e-12)")
        ->check(CLI::PositiveNumber);
    s->add_option("--out", c.out_path, "write the JSON report to this file");
  };
  auto seeded = [&](CLI::App* s) { s->add_option("--seed", c.seed, "seed for randomized search"); };

  CLI::App* metric = app.add_subcommand("metric", "metric documents");
  metric->require_subcommand(1);
  CLI::App* mv = metric->add_subcommand("validate", "check the metric axioms");
  mv->add_option("--in", c.in_path, "metric or graph JSON")->required();
  common(mv);

  CLI::App* sub = app.add_subcommand("subembed", "rough subembeddings in the plane");
  sub->require_subcommand(1);
  CLI::App* sd = sub->add_subcommand("defect", "minimal constant of an ordered tuple or point set");
  sd->add_option("--metric", c.in_path, "metric or graph JSON")->required();
  sd->add_option("--order", c.order, "comma-separated labels or indices")->required();
  sd->add_flag("--set", c.set_level, "maximize over orderings of the points");
  sd->add_option("--restarts", c.restarts, "random restarts per fold pattern");
  sd->add_option("--orderings", c.orderings, "sampled orderings for more than 6 points");
  sd->add_option("--C", c.C, "fail (exit 1) when the constant exceeds this");
  common(sd);
  seeded(sd);
  CLI::App* sc = sub->add_subcommand("check", "re-validate a certificate");
  sc->add_option("--metric", c.in_path, "metric or graph JSON")->required();
  sc->add_option("--cert", c.cert_path, "certificate JSON")->required();
  sc->add_option("--C", c.C, "constant to test (default: the certificate's C)");
  common(sc);

  CLI::App* np = app.add_subcommand("npoint", "n-point condition over subsets of a space");
  np->add_option("--metric", c.in_path, "metric or graph JSON")->required();
  np->add_option("--n", c.n, "subset size")->check(CLI::Range(3, 8));
  np->add_option("--budget", c.budget, "subsets checked (all when fewer)");
  np->add_option("--restarts", c.restarts, "random restarts per fold pattern");
  np->add_option("--orderings", c.orderings, "sampled orderings for more than 6 points");
  np->add_option("--C", c.C, "fail (exit 1) when the constant exceeds this");
  common(np);
  seeded(np);

  CLI::App* rc = app.add_subcommand("rcat", "rough CAT(0) comparison defect");
  rc->require_subcommand(1);
  CLI::App* rd = rc->add_subcommand("defect", "sampled defect over geodesic triangles");
  rd->add_option("--space", c.in_path, "graph or metric JSON")->required();
  rd->add_option("--budget", c.budget, "vertex triples sampled")->required();
  rd->add_option("--eps", c.eps, "threshold parameter in (0, 1]");
  rd->add_option("--samples", c.samples, "points per side");
  rd->add_option("--C", c.C, "fail (exit 1) when the defect exceeds this");
  common(rd);
  seeded(rd);

  CLI::App* gl = app.add_subcommand("glue", "glued convex polygons");
  gl->require_subcommand(1);
  CLI::App* gd = gl->add_subcommand("dist", "distance in the glued polygon");
  gd->add_option("--gluing", c.in_path, "gluing JSON")->required();
  gd->add_option("--a", c.point_a, "x,y (looked up in q1 first)")->required();
  gd->add_option("--b", c.point_b, "x,y (looked up in q2 first)")->required();
  common(gd);
  CLI::App* gb = gl->add_subcommand("build", "convex n-gon embedding of a polygon");
  gb->add_option("--polygon", c.in_path, "polygon JSON (vertices u_1..u_n)")->required();
  gb->add_option("--gluing", c.gluing_path, "ambient glued polygon (default: the plane)");
  gb->add_option("--shortness", c.h, "h: excess length allowed on each side");
  gb->add_option("--C-prime", c.C_prime, "comparison constant C' of the space");
  gb->add_option("--samples", c.samples, "boundary samples per side");
  common(gb);
  CLI::App* gc = gl->add_subcommand("convexify", "convexify a glued polygon at a reflex hinge");
  gc->add_option("--gluing", c.in_path, "gluing JSON")->required();
  gc->add_option("--samples", c.samples, "boundary samples per side for the Lipschitz check");
  common(gc);

  CLI::App* lim = app.add_subcommand("limit", "defects along space sequences");
  lim->require_subcommand(1);
  CLI::App* lt = lim->add_subcommand("trend", "set-level 5-point defect per space");
  lt->add_option("--config", c.in_path, "experiment config JSON")->required();
  lt->add_option("--csv", c.csv_path, "also write m,defect5,rcat_defect,bound");
  common(lt);
  seeded(lt);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kInputError;
  }
  for (CLI::App* top : app.get_subcommands())
    for (CLI::App* leaf : top->get_subcommands()) c.command = top->get_name() + " " + leaf->get_name();
  if (c.command.empty()) c.command = app.get_subcommands().front()->get_name();
  return std::nullopt;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.command == "metric validate") return metric_validate(c, out);
    if (c.command == "subembed defect") return subembed_defect(c, out);
    if (c.command == "subembed check") return subembed_check(c, out, err);
    if (c.command == "npoint") return npoint(c, out);
    if (c.command == "rcat defect") return rcat_defect(c, out);
    if (c.command == "glue dist") return glue_dist(c, out);
    if (c.command == "glue build") return glue_build(c, out);
    if (c.command == "glue convexify") return glue_convexify(c, out);
    if (c.command == "limit trend") return limit_trend(c, out);
    err << "error: unknown command '" << c.command << "'\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Json::exception& e) {
    err << "error: ParseError: " << e.what() << "\n";
    return kInputError;
  }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  if (auto code = parse_args(args, c, out, err)) return *code;
  return run(c, out, err);
}

}  // namespace curvcert::cli
