#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curvcert/metric.hpp"
#include "curvcert/subembedding.hpp"

namespace curvcert {

// One space X_m of a sequence. `points` maps the sequence's shared point
// ids to vertices of X_m, so the same physical tuple can be followed
// through the sequence.
struct SpaceInstance {
  double m = 1.0;  // sequence parameter (spacing, scale factor, ...)
  FiniteMetric metric;
  std::optional<GraphSpace> graph;  // present for graph models
  std::vector<std::size_t> points;
  std::optional<double> declared_C;  // rough CAT(0) constant, if known
};

struct SpaceSequence {
  std::string family;
  std::map<std::string, double> parameters;
  std::vector<SpaceInstance> spaces;
};

// Grid points of the unit square at each spacing, joined when at most
// `radius` apart (edge weight = Euclidean length). Shared ids are the points
// of the coarsest grid.
SpaceSequence square_net_sequence(const std::vector<double>& spacings, double radius = 0.3);
// A single random weighted tree on `vertices` vertices, repeated `count` times
// (declared constant 0).
SpaceSequence tree_sequence(std::size_t vertices, std::size_t count, std::uint64_t seed);
// Cycle graph of the given circumference split into `vertices` equal edges.
SpaceSequence cycle_sequence(double circumference, std::size_t vertices, std::size_t count);
// (X, d / f) for each factor f.
SpaceSequence scaled_sequence(const SpaceInstance& base, const std::vector<double>& factors,
                              const std::string& family = "scaled");

// Validates every metric and the point maps. Throws GeneratorMismatch.
void check_sequence(const SpaceSequence& seq);

// Seeded random 5-element subsets of the shared ids.
std::vector<std::vector<std::size_t>> sample_tuples(std::size_t ids, std::size_t count,
                                                    std::uint64_t seed, std::size_t size = 5);

struct LimitTrial {
  std::vector<std::size_t> tuple;          // ids in the target
  double target_defect = 0.0;
  std::vector<std::size_t> qualifying;     // sequence positions within eps
  std::optional<double> best_sequence_defect;  // min defect over qualifying positions
  std::vector<double> max_deviation;       // per position: max |d - d_m| on the tuple
  bool approximated = false;               // some position qualifies
  bool transfer_holds = false;             // target <= best + 2 eps
};

struct LimitReport {
  double eps = 0.0;
  std::vector<LimitTrial> trials;
  bool all_approximated = false;
  bool all_transfer = false;
};

// Compares sampled 5-tuples of `target` (point ids are its indices, matched
// to `seq` through the point maps) with the sequence.
LimitReport five_point_limit_check(const SpaceSequence& seq, const FiniteMetric& target, double eps,
                                   std::size_t trials, std::uint64_t seed = 0,
                                   const SetOptions& options = {});

struct TrendRow {
  double m = 0.0;
  double defect5 = 0.0;       // max set-level defect over the sampled tuples
  std::optional<double> rcat_defect;
  double bound = 0.0;         // defect5 + 2 sqrt(3)
  bool forward_ok = true;     // rcat_defect <= bound + 1e-3
  std::optional<bool> declared_ok;  // defect5 <= 3 C_0 + 1e-6
};

struct TrendReport {
  std::string family;
  std::vector<TrendRow> rows;
  bool strictly_decreasing = false;
  bool nonincreasing = false;
  std::vector<double> ratios;  // defect5[k + 1] / defect5[k]
  std::string decay;
};

struct TrendOptions {
  std::size_t tuples = 20;
  std::size_t rcat_budget = 0;  // 0 skips the rcat column
  std::size_t rcat_samples = 8;
  std::uint64_t seed = 0;
  SetOptions set;
};

TrendReport defect_trend(const SpaceSequence& seq, const TrendOptions& options = {});

std::string trend_csv(const TrendReport& report);

}  // namespace curvcert
