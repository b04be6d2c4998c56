#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyweight/report.hpp"

namespace polyweight::cli {

/// A fully-resolved experiment. `canonical()` round-trips losslessly through
/// the command line; the seed pins every stochastic choice.
struct ExperimentConfig {
  std::string command;
  std::string weight_spec = "one";
  std::vector<long long> n_list;
  double p = 2.0;
  double q = 2.0;
  double c_const = 4.0;
  double alpha = 1.0;
  double gamma = 0.05;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  int restarts = 16;
  int resolution = 256;
  int trials = 12;
  long long k_cap = 100000000LL;
  std::string csv_path;
  std::string json_path;
  std::string svg_path;

  std::string canonical() const;
};

/// Parses "4,8,16" lists and "3..6" ranges.
std::vector<long long> parse_n_list(const std::string& text);
std::string format_n_list(const std::vector<long long>& ns);

/// Dispatches one experiment. Per-row failures are embedded in the report,
/// never abort the batch. Writes CSV/JSON/SVG when paths are set.
report::RunReport run(const ExperimentConfig& cfg);

/// Exit code policy: 0 all checks pass, 1 some check failed, 2 usage error.
int main_entry(int argc, char** argv);

}  // namespace polyweight::cli
