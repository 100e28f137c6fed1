// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "curvcert/experiments.hpp"
#include "curvcert/gluing.hpp"
#include "curvcert/rcat.hpp"
#include "curvcert/subembedding.hpp"
#include "support.hpp"

using namespace curvcert;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

std::vector<std::vector<double>> sub_table(const FiniteMetric& m, const std::vector<std::size_t>& idx) {
  std::vector<std::vector<double>> t(idx.size(), std::vector<double>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) t[i][j] = m(idx[i], idx[j]);
  return t;
}

std::vector<std::size_t> distinct_subset(testgen::Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> all = iota_indices(n);
  std::shuffle(all.begin(), all.end(), rng.engine());
  all.resize(k);
  return all;
}

// ---------------------------------------------------------------------------

Outcome oracle_agreement() {
  const auto t0 = Clock::now();
  testgen::Rng rng(1001);
  std::vector<std::pair<std::string, std::vector<std::vector<double>>>> corpus;
  for (int k = 0; k < 60; ++k) {
    const std::size_t n = k % 2 ? 4 : 5;
    switch (k % 4) {
      case 0: {
        std::vector<Point2> p(n);
        for (Point2& q : p) q = rng.point(-1, 1);
        corpus.emplace_back("planar", testgen::euclidean_table(p));
        break;
      }
      case 1: {
        const FiniteMetric m = path_metric(testgen::random_tree(rng, 10));
        corpus.emplace_back("tree", sub_table(m, distinct_subset(rng, 10, n)));
        break;
      }
      case 2: corpus.emplace_back("cycle", testgen::circle_table(rng, n, 4.0)); break;
      default: {
        const FiniteMetric m = path_metric(testgen::random_connected_graph(rng, 8, 0.4));
        corpus.emplace_back("random", sub_table(m, distinct_subset(rng, 8, n)));
      }
    }
  }
  Outcome out;
  double worst = 0.0;
  int failures = 0;
  for (const auto& [kind, d] : corpus) {
    const TupleTable t = tuple_from_table(d);
    const double lib = minimal_defect_ordered(t).C;
    const OracleResult oracle = brute_force_oracle(t);
    const double gap = std::abs(lib - oracle.C);
    worst = std::max(worst, gap);
    if (gap > std::max(1e-6, oracle.grid_error)) {
      ++failures;
      std::fprintf(stderr, "  %s tuple: library %.12g oracle %.12g grid error %.3g\n", kind.c_str(), lib,
                   oracle.C, oracle.grid_error);
    }
  }
  const double secs = seconds_since(t0);
  out.pass = failures == 0 && secs <= 60.0;
  out.detail = std::to_string(corpus.size()) + " tuples, " + std::to_string(failures) + " disagreements, worst gap " +
               fmt("%.3g", worst) + ", " + fmt("%.1f s", secs) + " (limit 60 s)";
  return out;
}

Outcome forced_values() {
  const std::vector<std::vector<double>> c4 = {{0, 1, 2, 1}, {1, 0, 1, 2}, {2, 1, 0, 1}, {1, 2, 1, 0}};
  const std::vector<std::vector<double>> crossing = {{0, 1, 1, 2}, {1, 0, 2, 1}, {1, 2, 0, 1}, {2, 1, 1, 0}};
  const std::vector<std::vector<double>> star = {{0, 1, 1, 1}, {1, 0, 2, 2}, {1, 2, 0, 2}, {1, 2, 2, 0}};
  const double cyc = minimal_defect_ordered(tuple_from_table(c4)).C;
  const double cross = minimal_defect_ordered(tuple_from_table(crossing)).C;
  const OrderedDefect st = minimal_defect_ordered(tuple_from_table(star));
  const double r3 = st.cert.config.diagonals.at(1);
  Outcome out;
  out.pass = std::abs(cyc - 2.0) <= 1e-6 && cross <= 1e-6 && st.C <= 1e-6 && std::abs(r3 - std::sqrt(3.0)) <= 1e-4;
  out.detail = "C4 cyclic " + fmt("%.9f", cyc) + ", crossing " + fmt("%.3g", cross) + ", star " + fmt("%.3g", st.C) +
               " at r3 = " + fmt("%.9f", r3);
  return out;
}

Outcome cat0_witnesses() {
  const auto t0 = Clock::now();
  testgen::Rng rng(1003);
  double worst_plane = 0.0, worst_tree = 0.0;
  const std::vector<std::size_t> five = iota_indices(5);
  for (int k = 0; k < 1000; ++k) {
    std::vector<Point2> p(5);
    for (Point2& q : p) q = rng.point(-1, 1);
    worst_plane = std::max(worst_plane, minimal_defect_set(validate_metric(testgen::euclidean_table(p)), five).C);
  }
  for (int k = 0; k < 1000; ++k) {
    const FiniteMetric m = path_metric(testgen::random_tree(rng, 12));
    const auto idx = distinct_subset(rng, 12, 5);
    worst_tree = std::max(worst_tree, minimal_defect_set(m, idx).C);
  }
  const double secs = seconds_since(t0);
  Outcome out;
  out.pass = worst_plane <= 1e-6 && worst_tree <= 1e-6 && secs <= 120.0;
  out.detail = "1000 planar max " + fmt("%.3g", worst_plane) + ", 1000 tree max " + fmt("%.3g", worst_tree) + ", " +
               fmt("%.1f s", secs) + " (limit 120 s)";
  return out;
}

Outcome lemma_suites() {
  testgen::Rng rng(1004);
  int projection_fail = 0, eps_cases = 0, paths = 0;
  while (paths < 10000) {
    const Point2 x = rng.point(-2, 2), y = rng.point(-2, 2);
    const double l = dist(x, y);
    if (l < 1e-3) continue;
    ++paths;
    // Alternate free h with h = eps / (1 v l), eps <= 1, where the sqrt(3 eps)/2 form applies.
    const double h = paths % 2 ? rng.uniform(0, 1.5) : rng.uniform(0.001, 1.0) / std::max(1.0, l);
    const ProjectionReport rep = short_segment_projection(testgen::random_short_path(rng, x, y, h), x, y, h, 32);
    if (rep.eps_bound) ++eps_cases;
    if (!rep.ok()) ++projection_fail;
  }
  int two_triangle_fail = 0;
  std::size_t instances = 0;
  for (double eps : {0.01, 0.25, 1.0}) {
    int valid = 0;
    while (valid < 100000) {
      const auto inst = testgen::random_two_triangle(rng, eps);
      if (!inst) continue;
      ++valid;
      if (!two_triangle_check(*inst).pass) ++two_triangle_fail;
    }
    instances += static_cast<std::size_t>(valid);
  }
  double worst_identity = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const auto r = parallelogram_point(rng.point(-3, 3), rng.point(-3, 3), rng.point(-3, 3), rng.uniform());
    worst_identity = std::max(worst_identity, std::abs(r.lhs - r.rhs));
  }
  Outcome out;
  out.pass = projection_fail == 0 && two_triangle_fail == 0 && worst_identity <= 1e-9 && eps_cases > 0;
  out.detail = std::to_string(paths) + " polylines (" + std::to_string(eps_cases) + " with the eps bound), " +
               std::to_string(projection_fail) + " violations; " + std::to_string(instances) +
               " two-triangle instances, " + std::to_string(two_triangle_fail) + " violations; identity max error " +
               fmt("%.3g", worst_identity);
  return out;
}

template <class S>
double sampled_set_defect(const FiniteMetric& m, testgen::Rng& rng, std::size_t tuples) {
  double worst = 0.0;
  for (std::size_t k = 0; k < tuples; ++k) worst = std::max(worst, minimal_defect_set(m, distinct_subset(rng, m.size(), 5)).C);
  return worst;
}

Outcome forward_consistency() {
  testgen::Rng rng(1005);
  struct Row {
    std::string name;
    double rcat = 0.0;
    double c5 = 0.0;
    bool flat = false;  // both sides expected near 0
  };
  std::vector<Row> rows;
  auto graph_row = [&](const std::string& name, const GraphSpace& g, bool flat) {
    const MetricGraph mg(g);
    Row r{name, rcat_space_defect(mg, 200, {}, 8, 0).defect, sampled_set_defect<MetricGraph>(mg.metric(), rng, 10), flat};
    rows.push_back(r);
  };
  for (int k = 0; k < 3; ++k) graph_row("tree" + std::to_string(k), testgen::random_tree(rng, 30), true);
  graph_row("cycle4", testgen::cycle_graph(16, 4.0), false);
  graph_row("cycle8", testgen::cycle_graph(16, 8.0), false);
  for (int k = 0; k < 2; ++k) graph_row("graph" + std::to_string(k), testgen::random_connected_graph(rng, 14, 0.25), false);
  for (const SpaceInstance& s : square_net_sequence({0.2, 0.1}).spaces)
    graph_row("net" + fmt("%.2f", s.m), *s.graph, false);
  {
    PlanarSites sites;
    for (int k = 0; k < 10; ++k) sites.sites.push_back(rng.point(0, 1));
    const FiniteMetric m = validate_metric(testgen::euclidean_table(sites.sites));
    rows.push_back({"plane", rcat_space_defect(sites, 200, {}, 8, 0).defect, sampled_set_defect<PlanarSites>(m, rng, 10), true});
  }
  Outcome out;
  const double bound_shift = 2.0 * std::sqrt(3.0) + 1e-3;
  for (const Row& r : rows) {
    const bool ok = r.rcat <= r.c5 + bound_shift && (!r.flat || (r.rcat <= 1e-6 && r.c5 <= 1e-6));
    out.pass = out.pass && ok;
    out.detail += (out.detail.empty() ? "" : "; ") + r.name + " " + fmt("%.3g", r.rcat) + " <= " + fmt("%.3g", r.c5) + "+2sqrt3";
  }
  return out;
}

std::vector<Point2> random_polygon(testgen::Rng& rng, bool convex) {
  const std::size_t n = 3 + rng.below(5);
  return convex ? testgen::random_convex_polygon(rng, n) : testgen::random_star_polygon(rng, n);
}

template <class S>
bool embedding_ok(const S& space, const NgonEmbedding<typename S::Point>& e, double& worst_side, double& worst_diag) {
  const auto& q = e.map.q;
  const std::size_t n = q.size();
  for (std::size_t i = 0; i < n; ++i) {
    worst_side = std::max(worst_side, std::abs(dist(q[i], q[(i + 1) % n]) - space.distance(e.map.u[i], e.map.u[(i + 1) % n])));
    worst_diag = std::max(worst_diag, space.distance(e.map.u[0], e.map.u[i]) - dist(q[0], q[i]));
  }
  const AnReport rep = verify_An(space, e.map, static_cast<double>(n - 2) * e.C_prime, 8);
  return is_convex_ccw(q) && rep.pass;
}

Outcome construction() {
  testgen::Rng rng(1006);
  const EuclideanPlane plane;
  int built = 0, bad = 0;
  double worst_side = 0.0, worst_diag = -INFINITY;
  for (int k = 0; k < 10; ++k) {
    const auto u = random_polygon(rng, k % 2 == 0);
    const auto e = build_ngon_embedding(plane, geodesic_sides(plane, u), 0.0, 0.0);
    ++built;
    if (!embedding_ok(plane, e, worst_side, worst_diag)) ++bad;
  }
  for (int k = 0; k < 10; ++k) {
    const double top = k % 2 ? 1.0 : 0.5;
    const GluedSpace space(make_gluing(make_convex_polygon({{-1, 0}, {0, 0}, {0, 1}, {-1, 1}}),
                                       make_convex_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), {0, 0}, {0, top}));
    const std::size_t n = 3 + rng.below(5);
    std::vector<GluedPoint> u;
    for (std::size_t i = 0; i < n; ++i) {
      const int piece = rng.uniform() < 0.5 ? 1 : 2;
      u.push_back({piece, testgen::point_in_convex(rng, piece == 1 ? space.gluing().q1.vertices : space.gluing().q2.vertices)});
    }
    const auto e = build_ngon_embedding(space, geodesic_sides(space, u), 0.0, 0.0);
    ++built;
    if (!embedding_ok(space, e, worst_side, worst_diag)) ++bad;
  }
  Outcome out;
  out.pass = bad == 0 && worst_side <= 1e-6 && worst_diag <= 1e-6;
  out.detail = std::to_string(built) + " polygons (10 planar, 10 in glued squares), " + std::to_string(bad) +
               " failing A_n or convexity, worst side error " + fmt("%.3g", worst_side) + ", worst diagonal excess " +
               fmt("%.3g", worst_diag);
  return out;
}

Outcome gluing_oracle() {
  testgen::Rng rng(1007);
  double worst = 0.0, worst_triangle = -INFINITY;
  int pairs = 0, triples = 0;
  for (int g = 0; g < 10; ++g) {
    const auto r = testgen::random_gluing(rng);
    const GluedSpace space(make_gluing(make_convex_polygon(r.q1), make_convex_polygon(r.q2), r.s0, r.s1));
    for (int k = 0; k < 1000; ++k, ++pairs) {
      const Point2 a = testgen::point_in_convex(rng, r.q1), b = testgen::point_in_convex(rng, r.q2);
      const double d = glued_distance(space.gluing(), a, b);
      worst = std::max(worst, std::abs(d - testgen::refined_seam_distance(r.s0, r.s1, a, b, 10000)));
      // Never above the plain sampled minimum either.
      worst = std::max(worst, d - testgen::sampled_seam_distance(r.s0, r.s1, a, b, 10000));
    }
    for (int k = 0; k < 1000; ++k, ++triples) {
      GluedPoint p[3];
      for (GluedPoint& x : p) {
        x.piece = rng.uniform() < 0.5 ? 1 : 2;
        x.p = testgen::point_in_convex(rng, x.piece == 1 ? r.q1 : r.q2);
      }
      worst_triangle = std::max(worst_triangle, space.distance(p[0], p[2]) - space.distance(p[0], p[1]) - space.distance(p[1], p[2]));
    }
  }
  Outcome out;
  out.pass = worst <= 1e-6 && worst_triangle <= 1e-12;
  out.detail = std::to_string(pairs) + " pairs over 10 gluings, worst gap " + fmt("%.3g", worst) + "; " +
               std::to_string(triples) + " triples, worst triangle excess " + fmt("%.3g", worst_triangle);
  return out;
}

Outcome limit_trend() {
  const auto t0 = Clock::now();
  TrendOptions opt;
  opt.tuples = 20;
  const TrendReport net = defect_trend(square_net_sequence({0.2, 0.1, 0.05}), opt);
  Outcome out;
  out.pass = net.strictly_decreasing;
  out.detail = "net series";
  for (const TrendRow& r : net.rows) out.detail += " " + fmt("%.6f", r.defect5);
  testgen::Rng rng(1008);
  double worst_rel = 0.0;
  std::vector<SpaceInstance> bases = {cycle_sequence(4.0, 12, 2).spaces[0]};
  {
    SpaceInstance g;
    g.graph = testgen::random_connected_graph(rng, 12, 0.3);
    g.metric = path_metric(*g.graph);
    g.points = iota_indices(12);
    bases.push_back(g);
  }
  for (const SpaceInstance& base : bases) {
    opt.tuples = 10;
    const TrendReport rep = defect_trend(scaled_sequence(base, {1.0, 2.0, 5.0, 100.0}), opt);
    const double ref = rep.rows[0].defect5;
    for (const TrendRow& r : rep.rows) worst_rel = std::max(worst_rel, std::abs(r.defect5 * r.m - ref) / ref);
    out.pass = out.pass && ref > 0.0 && rep.strictly_decreasing;
  }
  const double secs = seconds_since(t0);
  out.pass = out.pass && worst_rel <= 1e-9 && secs <= 300.0;
  out.detail += "; scaled sequences worst relative error " + fmt("%.3g", worst_rel) + ", " + fmt("%.1f s", secs) +
                " (limit 300 s)";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 subembedding oracle agreement", oracle_agreement},
      {"2 forced values", forced_values},
      {"3 CAT(0) witnesses", cat0_witnesses},
      {"4 lemma suites", lemma_suites},
      {"5 forward consistency", forward_consistency},
      {"6 construction correctness", construction},
      {"7 gluing oracle", gluing_oracle},
      {"8 limit trend", limit_trend},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
