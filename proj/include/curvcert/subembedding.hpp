#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "curvcert/metric.hpp"
#include "curvcert/plane.hpp"

namespace curvcert {

// Planar placement of an ordered chain x_1..x_n (stored 0-based). The first
// point sits at the origin, the second on the positive x-axis.
//
// The placement is a fan of triangles (ox_1, ox_i, ox_{i+1}), i = 2..n-1,
// whose sides are the diagonals r_i = |ox_1 - ox_i|, r_{i+1} and the chain
// distance d(x_i, x_{i+1}). `folds` has one sign per fan triangle: the first
// is the orientation of the first triangle (+1 counterclockwise); each later
// sign is -1 when the triangle keeps its predecessor's orientation (the fan
// keeps turning) and +1 when it is folded back over the shared diagonal.
struct ChainConfig {
  std::vector<Point2> points;
  std::vector<double> diagonals;  // r_i for i = 2..n, i.e. |ox_1 - ox_i|, size n-1
  std::vector<int> folds;         // size n-2
};

// Places the chain from the free diagonals r_3..r_{n-1} (n-3 values) and
// the fold signs (n-2 values). r_2 and r_n are fixed by the chain.
ChainConfig realize_chain(const TupleTable& tuple, std::span<const double> free_diagonals,
                          std::span<const int> folds);

// Wraps explicit chain points (first point is ox_1) with their diagonals
// and fold signs.
ChainConfig chain_config(std::vector<Point2> points);

// Recovers fold signs from an explicit placement (zero-area triangles keep
// the previous orientation).
std::vector<int> folds_from_points(std::span<const Point2> points);

struct PairSlack {
  std::size_t i = 0;  // 0-based tuple positions
  std::size_t j = 0;
  double slack = 0.0;
};

struct SubembeddingCertificate {
  ChainConfig config;
  double C = 0.0;                  // constant the slacks are measured against
  double achieved = 0.0;           // max(0, worst d(x_i,x_j) - |ox_i - ox_j|)
  std::vector<double> cond1;       // |ox_i - ox_{i-1}| - d(x_i, x_{i-1}), cyclic
  std::vector<double> cond2;       // |ox_1 - ox_i| - d(x_1, x_i), i = 2..n
  std::vector<PairSlack> cond3;    // |ox_i - ox_j| + C - d(x_i, x_j), 2 <= i < j <= n
  std::vector<std::size_t> ordering;
  bool pass = false;
};

inline constexpr double kSlackTolerance = 1e-9;

// Slack report of a placement against the three subembedding conditions.
// Throws ChainMismatch when the chain equalities are off by more than 1e-9
// (relative to the tuple's scale).
SubembeddingCertificate subembedding_slack(const TupleTable& tuple, const ChainConfig& config,
                                           double C);

struct SearchOptions {
  std::size_t restarts = 16;
  std::uint64_t seed = 0;
  // Stop as soon as a placement with violation <= stop_below is found.
  double stop_below = -std::numeric_limits<double>::infinity();
};

struct OrderedDefect {
  double C = 0.0;
  SubembeddingCertificate cert;
};

// Smallest C for which the ordered tuple admits a C-rough subembedding, found
// by multi-start simplex descent over (diagonals, folds). Supports n <= 8.
OrderedDefect minimal_defect_ordered(const TupleTable& tuple, const SearchOptions& options = {});

struct SetOptions {
  std::size_t max_full_enumeration = 6;
  std::optional<std::size_t> sample_orderings;  // required beyond max_full_enumeration
  SearchOptions search;
};

struct SetDefect {
  double C = 0.0;
  std::vector<std::size_t> worst_ordering;  // metric indices
  SubembeddingCertificate cert;             // certificate for the worst ordering
  std::size_t orderings_checked = 0;
};

// Orderings of a point set up to reversing the chain around the first point
// ((x1, x2, ..., xn) ~ (x1, xn, ..., x2)), in lexicographic order.
std::vector<std::vector<std::size_t>> canonical_orderings(std::span<const std::size_t> indices);

// Max over orderings of the minimal ordered defect.
SetDefect minimal_defect_set(const FiniteMetric& metric, std::span<const std::size_t> indices,
                             const SetOptions& options = {});

struct OracleResult {
  double C = 0.0;
  double violation = 0.0;        // best grid objective (may be negative)
  double grid_error = 0.0;       // local Lipschitz estimate times the final spacing
  std::vector<double> diagonals; // minimizing r_3..r_{n-1}
  std::vector<int> folds;
};

// Exhaustive grid search over the free diagonals and every fold pattern,
// followed by nested zoom grids around the best cells. `resolution` is the
// number of nodes per free axis on the coarse grid. Supports n <= 5.
OracleResult brute_force_oracle(const TupleTable& tuple, std::size_t resolution = 401);

}  // namespace curvcert
