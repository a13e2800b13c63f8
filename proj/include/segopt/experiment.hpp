#pragma once

#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "segopt/gbnm.hpp"
#include "segopt/sego.hpp"

namespace segopt {

// One experiment = one problem, one or more methods, `runs` independent
// repetitions. Run i always derives its streams from base_seed + i, so two
// methods listed together (or run separately with the same base seed) share
// bit-identical initial plans per repetition.
struct ExperimentConfig {
  std::string name = "experiment";
  std::string problem = "1d";
  double sigma_x = std::numeric_limits<double>::quiet_NaN();  // problem default
  std::string barrier = "h400";
  std::vector<std::string> methods = {"sego-adaptive"};  // sego-adaptive | sego-constant | gbnm
  long long nfe_budget = 150;
  int runs = 20;
  std::uint64_t base_seed = 1;
  std::string out_dir = "results";
  SegoConfig sego;                 // nfe_budget/seed filled per run
  GbnmConfig gbnm;                 // likewise
  double gbnm_matched_target = 1e-3;
};

struct MethodSummary {
  std::string method;
  std::vector<double> bests;      // best estimate per run, run order
  std::vector<long long> nfe;     // evaluations consumed per run
  double mean = 0.0;
  double p5 = 0.0;
  double p95 = 0.0;
  double mean_nfe = 0.0;
};

// Linear-interpolation percentile on the order statistics: with n sorted
// values the q-th percentile sits at rank (n - 1) q / 100.
double percentile(std::vector<double> values, double q);

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);

// Executes every (method, run) pair in a worker pool, writes
// <out_dir>/<name>[_<method>]/run_<i>.csv and summary.json, and returns the
// per-method summaries. Output bytes depend only on the config.
std::map<std::string, MethodSummary> run_experiment(const ExperimentConfig& config);

// Single run dispatch, exposed for tests.
RunReport run_method(const ExperimentConfig& config, const std::string& method,
                     int run_index);

void write_trace_csv(const std::filesystem::path& path, const RunReport& report,
                     const StochasticProblem& problem);

}  // namespace segopt
