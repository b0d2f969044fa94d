#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "carlson/errors.hpp"

namespace carlson {

/// Invalid experiment configuration (exit status 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

enum ExitStatus : int {
  kPass = 0,
  kToleranceFailure = 1,
  kUsageError = 2,
  kConstructionFailure = 3,
};

struct ExperimentConfig {
  /// verify-sigma, build-measure, verify-boundary, nested-build, moments or kronecker.
  std::string kind;

  std::string poly;
  std::string mu;
  std::string atoms;
  std::string plan;
  std::string out;

  double sigma = 1.0;
  std::vector<double> t_grid{1e2, 1e3, 1e4};
  int levels = 4;
  std::string growth = "default";
  std::uint64_t budget = 1'000'000'000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// Tolerance of the pass verdict; negative selects the kind's default.
  double tol = -1.0;
  std::uint64_t mc_samples = 0;

  std::size_t dim = 1;
  std::vector<double> theta;
  double eps = 0.05;
  double t_min = 0.0;
  /// windowed or reference.
  std::string solver = "windowed";

  /// "a1,a2:b1,b2;..." list of (alpha, beta) pairs.
  std::string pairs;
  /// Moment horizon; 0 selects the last level boundary (atoms) or 1e5 (Lebesgue).
  double t_max = 0.0;
  bool lebesgue = false;
};

/// Check ranges and required inputs; throws UsageError.
void validate(const ExperimentConfig& config);

/// Run one experiment, write its artifacts atomically and print a one-line
/// JSON summary {kind, wall_time, key_metrics, pass} to `out`. Returns an
/// ExitStatus; diagnostics for status 2 go to `err`, status 3 prints a JSON
/// diagnostic to `out`.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Command-line front end: `carlson <kind> [flags]`, with an optional
/// --config JSON file whose entries are overridden by explicit flags.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "1,0:0,0;2,1:0,1" -> list of (alpha, beta) exponent vectors.
std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> parse_pairs(const std::string& text);

/// "100,1000,1e4" -> {100, 1000, 10000}.
std::vector<double> parse_list(const std::string& text);

}  // namespace carlson
