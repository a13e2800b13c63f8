#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "segopt/problems.hpp"
#include "segopt/rng.hpp"

namespace segopt {

// Replication batches start at `initial` evaluations and then grow the total
// by 50% (rounded up) until the error-variance target is met.
struct BatchSchedule {
  long long initial = 4;
  double growth = 1.5;

  long long next_total(long long n_r) const;
};

// Monte Carlo estimate of J(d) at one design point, kept as sufficient
// statistics so replications can be pooled later. design is stored in
// normalized coordinates; lambda is the error variance the point was
// *assigned* (the target), not the realized estimator variance.
struct SampleRecord {
  Eigen::VectorXd design;
  double sum = 0.0;
  double sum_sq = 0.0;
  long long n_r = 0;
  double lambda = 0.0;
  bool budget_exhausted = false;

  void add(double value);
  double mean() const;
  // Variance of the mean estimator; empty below two replications.
  std::optional<double> err_var() const;
};

double estimate_mean(const std::vector<double>& values);
double estimate_err_var(const std::vector<double>& values);

// Replicates phi(d, .) in growing batches until the estimator error variance
// drops to `target` or the evaluation budget runs out (budget_exhausted is
// set in that case, and with budget < 2 the record is a flagged single
// evaluation). Batches never overdraw `budget`. When `resume` is given it
// must refer to the same design; its statistics are extended and the stored
// lambda becomes min(previous, target).
SampleRecord integrate_to_target(const StochasticProblem& problem,
                                 const Eigen::VectorXd& d, double target,
                                 long long budget, const BatchSchedule& schedule,
                                 RngStream& rng,
                                 const SampleRecord* resume = nullptr);

// Pools extra replication values into an existing record and re-labels its
// target. Throws if `design` does not match the record.
SampleRecord merge(const SampleRecord& existing, const Eigen::VectorXd& design,
                   const std::vector<double>& additional, double new_target);

}  // namespace segopt
