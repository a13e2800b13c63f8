#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "segopt/adaptive.hpp"
#include "segopt/infill.hpp"
#include "segopt/kriging.hpp"
#include "segopt/mci.hpp"
#include "segopt/problems.hpp"
#include "segopt/rng.hpp"

namespace segopt {

enum class TargetMode { kAdaptive, kConstant };

struct SegoConfig {
  int n_s_factor = 7;          // initial plan size = n_s_factor * dim
  long long nfe_budget = 0;    // total phi evaluations, must exceed the plan
  double alpha = 1.0;          // risk weight in the effective-best rule
  TargetMode mode = TargetMode::kAdaptive;
  double constant_target = 1e-2;  // used when mode == kConstant
  AdaptiveConfig adaptive;
  FitOptions fit;
  InnerOptions inner;
  std::uint64_t seed = 0;  // label recorded in the report
};

struct TraceRow {
  int iter = 0;           // 0 for plan rows, infill counter afterwards
  long long nfe_cum = 0;
  Eigen::VectorXd point;  // normalized coordinates
  int n_close = 0;
  double lambda = 0.0;
  long long n_r = 0;
  double mean = 0.0;
  double err_var = 0.0;  // NaN below two replications
  double aei = 0.0;      // NaN for plan rows
};

struct RunReport {
  Eigen::VectorXd best_design;  // original units
  double best_estimate = 0.0;   // Monte Carlo mean at the effective best
  long long nfe_used = 0;
  std::vector<TraceRow> trace;
  std::uint64_t seed = 0;
};

// Final-state internals, exposed for validation.
struct SegoArtifacts {
  std::vector<SampleRecord> records;
  Surrogate final_model;
  int best_index = -1;
};

// One optimization run: Latin hypercube plan evaluated once per point, then
// fit / acquisition / replicate cycles until the evaluation budget is spent,
// closing with a final fit and the risk-weighted incumbent selection.
RunReport run(const StochasticProblem& problem, const SegoConfig& config,
              RngStream& rng, SegoArtifacts* artifacts = nullptr);

}  // namespace segopt
