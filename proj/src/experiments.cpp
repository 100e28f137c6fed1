#include "curvcert/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "curvcert/rcat.hpp"

namespace curvcert {

namespace {

std::size_t grid_count(double spacing) {
  return static_cast<std::size_t>(std::llround(1.0 / spacing)) + 1;
}

}  // namespace

SpaceSequence square_net_sequence(const std::vector<double>& spacings, double radius) {
  if (spacings.size() < 2) throw Error(ErrorCode::GeneratorMismatch, "a sequence needs at least two spaces");
  SpaceSequence seq;
  seq.family = "square_net";
  seq.parameters["radius"] = radius;
  const double coarse = *std::max_element(spacings.begin(), spacings.end());
  const std::size_t kc = grid_count(coarse);
  for (double s : spacings) {
    const std::size_t k = grid_count(s);
    if (std::abs((k - 1) * s - 1.0) > 1e-9) {
      throw Error(ErrorCode::GeneratorMismatch, "spacing must divide the unit side");
    }
    const std::size_t ratio = static_cast<std::size_t>(std::llround(coarse / s));
    if (std::abs(ratio * s - coarse) > 1e-9) {
      throw Error(ErrorCode::GeneratorMismatch, "spacings must refine the coarsest grid");
    }
    SpaceInstance inst;
    inst.m = s;
    GraphSpace g;
    g.vertices = k * k;
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c) g.coords.push_back({c * s, r * s});
    const auto reach = static_cast<long>(std::floor(radius / s + 1e-9));
    for (std::size_t v = 0; v < g.vertices; ++v) {
      const long r = static_cast<long>(v / k), c = static_cast<long>(v % k);
      for (long dr = 0; dr <= reach; ++dr) {
        for (long dc = -reach; dc <= reach; ++dc) {
          if (dr == 0 && dc <= 0) continue;
          const long r2 = r + dr, c2 = c + dc;
          if (r2 < 0 || c2 < 0 || r2 >= static_cast<long>(k) || c2 >= static_cast<long>(k)) continue;
          const double w = s * std::hypot(static_cast<double>(dr), static_cast<double>(dc));
          if (w > radius + 1e-12) continue;
          g.edges.push_back({v, static_cast<std::size_t>(r2) * k + static_cast<std::size_t>(c2), w});
        }
      }
    }
    for (std::size_t r = 0; r < kc; ++r)
      for (std::size_t c = 0; c < kc; ++c) inst.points.push_back(r * ratio * k + c * ratio);
    inst.metric = path_metric(g);
    inst.graph = std::move(g);
    seq.spaces.push_back(std::move(inst));
  }
  return seq;
}

SpaceSequence tree_sequence(std::size_t vertices, std::size_t count, std::uint64_t seed) {
  if (count < 2) throw Error(ErrorCode::GeneratorMismatch, "a sequence needs at least two spaces");
  std::mt19937_64 rng(seed);
  GraphSpace g;
  g.vertices = vertices;
  for (std::size_t v = 1; v < vertices; ++v) {
    const std::size_t parent = rng() % v;
    const double w = 0.1 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
    g.edges.push_back({parent, v, w});
  }
  SpaceSequence seq;
  seq.family = "tree";
  seq.parameters["vertices"] = static_cast<double>(vertices);
  SpaceInstance inst;
  inst.metric = path_metric(g);
  inst.graph = g;
  inst.declared_C = 0.0;
  for (std::size_t v = 0; v < vertices; ++v) inst.points.push_back(v);
  for (std::size_t m = 1; m <= count; ++m) {
    inst.m = static_cast<double>(m);
    seq.spaces.push_back(inst);
  }
  return seq;
}

SpaceSequence cycle_sequence(double circumference, std::size_t vertices, std::size_t count) {
  if (count < 2) throw Error(ErrorCode::GeneratorMismatch, "a sequence needs at least two spaces");
  if (vertices < 3) throw Error(ErrorCode::GeneratorMismatch, "a cycle needs at least three vertices");
  GraphSpace g;
  g.vertices = vertices;
  const double w = circumference / static_cast<double>(vertices);
  for (std::size_t v = 0; v < vertices; ++v) g.edges.push_back({v, (v + 1) % vertices, w});
  SpaceSequence seq;
  seq.family = "cycle";
  seq.parameters["circumference"] = circumference;
  seq.parameters["vertices"] = static_cast<double>(vertices);
  SpaceInstance inst;
  inst.metric = path_metric(g);
  inst.graph = g;
  for (std::size_t v = 0; v < vertices; ++v) inst.points.push_back(v);
  for (std::size_t m = 1; m <= count; ++m) {
    inst.m = static_cast<double>(m);
    seq.spaces.push_back(inst);
  }
  return seq;
}

SpaceSequence scaled_sequence(const SpaceInstance& base, const std::vector<double>& factors,
                              const std::string& family) {
  if (factors.size() < 2) throw Error(ErrorCode::GeneratorMismatch, "a sequence needs at least two spaces");
  SpaceSequence seq;
  seq.family = family;
  for (double f : factors) {
    if (!(f > 0.0)) throw Error(ErrorCode::GeneratorMismatch, "scale factors must be positive");
    SpaceInstance inst;
    inst.m = f;
    inst.metric = base.metric.scaled(f);
    if (base.graph) {
      GraphSpace g = *base.graph;
      for (Edge& e : g.edges) e.weight /= f;
      inst.graph = std::move(g);
    }
    inst.points = base.points;
    if (base.declared_C) inst.declared_C = *base.declared_C / f;
    seq.spaces.push_back(std::move(inst));
  }
  return seq;
}

void check_sequence(const SpaceSequence& seq) {
  if (seq.spaces.size() < 2) throw Error(ErrorCode::GeneratorMismatch, "a sequence needs at least two spaces");
  const std::size_t ids = seq.spaces.front().points.size();
  for (std::size_t k = 0; k < seq.spaces.size(); ++k) {
    const SpaceInstance& s = seq.spaces[k];
    validate_metric(s.metric.table(), 1e-9);
    if (s.points.size() != ids) {
      throw Error(ErrorCode::GeneratorMismatch, "point maps differ in size", {k});
    }
    for (std::size_t p : s.points)
      if (p >= s.metric.size()) throw Error(ErrorCode::GeneratorMismatch, "point map out of range", {k});
  }
}

std::vector<std::vector<std::size_t>> sample_tuples(std::size_t ids, std::size_t count,
                                                    std::uint64_t seed, std::size_t size) {
  if (ids < size) throw Error(ErrorCode::GeneratorMismatch, "not enough shared points for a tuple");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> out;
  while (out.size() < count) {
    std::vector<std::size_t> t;
    while (t.size() < size) {
      const std::size_t c = rng() % ids;
      if (std::find(t.begin(), t.end(), c) == t.end()) t.push_back(c);
    }
    std::sort(t.begin(), t.end());
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

std::vector<std::size_t> mapped(const SpaceInstance& s, const std::vector<std::size_t>& ids) {
  std::vector<std::size_t> out;
  for (std::size_t i : ids) out.push_back(s.points.at(i));
  return out;
}

}  // namespace

LimitReport five_point_limit_check(const SpaceSequence& seq, const FiniteMetric& target, double eps,
                                   std::size_t trials, std::uint64_t seed,
                                   const SetOptions& options) {
  check_sequence(seq);
  if (seq.spaces.front().points.size() != target.size()) {
    throw Error(ErrorCode::GeneratorMismatch, "point maps must cover every target point");
  }
  LimitReport rep;
  rep.eps = eps;
  rep.all_approximated = true;
  rep.all_transfer = true;
  std::vector<std::vector<double>> defect_cache(seq.spaces.size());
  for (const auto& tuple : sample_tuples(target.size(), trials, seed)) {
    LimitTrial trial;
    trial.tuple = tuple;
    trial.target_defect = minimal_defect_set(target, tuple, options).C;
    for (std::size_t k = 0; k < seq.spaces.size(); ++k) {
      const SpaceInstance& s = seq.spaces[k];
      const auto idx = mapped(s, tuple);
      double dev = 0.0;
      for (std::size_t a = 0; a < tuple.size(); ++a)
        for (std::size_t b = a + 1; b < tuple.size(); ++b)
          dev = std::max(dev, std::abs(target(tuple[a], tuple[b]) - s.metric(idx[a], idx[b])));
      trial.max_deviation.push_back(dev);
      if (dev < eps) {
        trial.qualifying.push_back(k);
        const double c = minimal_defect_set(s.metric, idx, options).C;
        trial.best_sequence_defect = trial.best_sequence_defect ? std::min(*trial.best_sequence_defect, c) : c;
      }
    }
    trial.approximated = !trial.qualifying.empty();
    trial.transfer_holds =
        trial.best_sequence_defect && trial.target_defect <= *trial.best_sequence_defect + 2.0 * eps + 1e-9;
    rep.all_approximated = rep.all_approximated && trial.approximated;
    rep.all_transfer = rep.all_transfer && trial.transfer_holds;
    rep.trials.push_back(std::move(trial));
  }
  return rep;
}

TrendReport defect_trend(const SpaceSequence& seq, const TrendOptions& options) {
  if (options.tuples == 0) throw Error(ErrorCode::BudgetZero, "tuple budget must be positive");
  check_sequence(seq);
  TrendReport rep;
  rep.family = seq.family;
  const auto tuples = sample_tuples(seq.spaces.front().points.size(), options.tuples, options.seed);
  for (const SpaceInstance& s : seq.spaces) {
    TrendRow row;
    row.m = s.m;
    for (const auto& t : tuples) row.defect5 = std::max(row.defect5, minimal_defect_set(s.metric, mapped(s, t), options.set).C);
    row.bound = row.defect5 + 2.0 * std::sqrt(3.0);
    if (options.rcat_budget > 0 && s.graph) {
      const MetricGraph mg(*s.graph);
      row.rcat_defect = rcat_space_defect(mg, options.rcat_budget, {}, options.rcat_samples, options.seed).defect;
      row.forward_ok = *row.rcat_defect <= row.bound + 1e-3;
    }
    if (s.declared_C) row.declared_ok = row.defect5 <= 3.0 * *s.declared_C + 1e-6;
    rep.rows.push_back(row);
  }
  rep.strictly_decreasing = true;
  rep.nonincreasing = true;
  for (std::size_t k = 0; k + 1 < rep.rows.size(); ++k) {
    const double a = rep.rows[k].defect5, b = rep.rows[k + 1].defect5;
    if (!(b < a)) rep.strictly_decreasing = false;
    if (b > a + 1e-9) rep.nonincreasing = false;
    rep.ratios.push_back(a > 0.0 ? b / a : (b > 0.0 ? std::numeric_limits<double>::infinity() : 1.0));
  }
  std::ostringstream desc;
  if (rep.strictly_decreasing) {
    double logsum = 0.0;
    for (double r : rep.ratios) logsum += std::log(r);
    desc << "strictly decreasing; mean step ratio " << std::exp(logsum / static_cast<double>(rep.ratios.size()));
  } else if (rep.nonincreasing) {
    desc << "nonincreasing";
  } else {
    desc << "not monotone";
  }
  rep.decay = desc.str();
  return rep;
}

std::string trend_csv(const TrendReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "m,defect5,rcat_defect,bound\n";
  for (const TrendRow& r : report.rows) {
    out << r.m << ',' << r.defect5 << ',';
    if (r.rcat_defect) out << *r.rcat_defect;
    out << ',' << r.bound << '\n';
  }
  return out.str();
}

}  // namespace curvcert
