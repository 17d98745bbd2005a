#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "besmn/estimation.hpp"
#include "besmn/meanfield.hpp"
#include "besmn/metrics.hpp"
#include "besmn/scenario.hpp"

namespace besmn {

// Subcommand entry points. Each writes its artifacts under an output
// directory, reports progress on `log`, and returns a process exit code:
// 0 success, 2 a validation verdict failed. Invalid inputs throw; the
// command-line wrapper maps exceptions to exit code 1.

struct DistributionOptions {
  int k = 2;
  double mu_d = 0.3;
  double mu_h = 0.7;
  int s_max = -1;  // negative: stop at the table's own converged end
  double tol = 1e-10;
  std::string out_dir = "out";
};
int cmd_distribution(const DistributionOptions& opt, std::ostream& log);

enum class EngineMode { On, Off, Both };

struct SimulateOptions {
  ScenarioConfig config;
  EngineMode mode = EngineMode::Both;
  std::optional<std::string> out_dir;  // overrides config.output_directory
  bool emit_graphs = false;
};
int cmd_simulate(const SimulateOptions& opt, std::ostream& log);

struct MeanFieldOptions {
  bool blockchain = false;
  double beta = 0.00359;
  double alpha = 0.02166;
  double S0 = 115.67961;
  double I0 = 4.48387;
  double R0_pop = 0.0;
  int horizon = 87;
  int l = 15;
  int k = 2;
  double mu_d = 0.3;
  double mu_h = 0.7;
  double tol = 1e-10;
  bool delta_at_zero = false;  // replace the race table by all mass at lag 0
  bool disjoint_lag_windows = false;
  std::string out_dir = "out";
};
int cmd_meanfield(const MeanFieldOptions& opt, std::ostream& log);

struct EstimateOptions {
  std::string data_path;
  long iterations = 10000;
  double burn_in = 0.75;
  std::uint64_t seed = 1;
  std::optional<ProposalScales> scales;  // default: 2% of each prior range
  double bin_width = 60.0;               // for raw timestamp input
  bool smooth = false;                   // centered moving average, width 3
  std::string out_dir = "out";
};
int cmd_estimate(const EstimateOptions& opt, std::ostream& log);

struct ValidateOptions {
  std::string suite;  // race | ballot | reduction | prior
  std::uint64_t seed = 1;
  double tol = 1e-10;
};
int cmd_validate(const ValidateOptions& opt, std::ostream& out);

// Reads a binned series (`t,count` header) or raw events (`timestamp`
// header, binned by floor division at bin_width). Malformed rows are
// collected and reported together with their row numbers.
ObservedSeries read_observed_series(const std::string& path, double bin_width, bool smooth);

// One-sided paired comparison of per-replicate values: the t statistic of
// mean(a - b) over its standard error.
double paired_t_statistic(const std::vector<double>& a, const std::vector<double>& b);

// Kolmogorov-Smirnov distance of a sample against Uniform(lo, hi).
double ks_uniform(std::vector<double> sample, double lo, double hi);

}  // namespace besmn
