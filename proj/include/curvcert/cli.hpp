#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace curvcert::cli {

// Exit statuses.
inline constexpr int kPass = 0;
inline constexpr int kConditionFailed = 1;
inline constexpr int kInputError = 2;

// Default metric tolerance: $CURVCERT_TOL if set and positive, else 1e-12.
double default_tolerance();

struct RunConfig {
  std::string command;  // "metric validate", "subembed defect", ...
  std::string in_path;  // metric / space / gluing / polygon / config document
  std::string cert_path;
  std::string gluing_path;  // glue build: optional ambient gluing
  std::string order;        // comma-separated labels or indices
  std::string point_a, point_b;
  bool set_level = false;
  std::size_t n = 5;
  std::size_t budget = 200;
  std::size_t samples = 8;
  std::size_t restarts = 16;
  std::size_t orderings = 0;  // sampled orderings beyond full enumeration
  double tol = 1e-12;
  double eps = 1.0;
  double h = 0.0;
  double C_prime = 0.0;
  std::optional<double> C;  // constant to test against
  std::string out_path;
  std::string csv_path;
  std::uint64_t seed = 0;
};

// Parses argv-style arguments (without the program name). Returns the exit
// status when parsing ends the run (help, usage errors) and fills `config`
// otherwise.
std::optional<int> parse_args(const std::vector<std::string>& args, RunConfig& config,
                              std::ostream& out, std::ostream& err);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_args followed by run.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace curvcert::cli
