#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "segopt/mci.hpp"
#include "segopt/problems.hpp"
#include "segopt/rng.hpp"
#include "segopt/sego.hpp"

namespace segopt {

struct LocalSearchResult {
  Eigen::VectorXd point;
  double value = 0.0;
  long long evals = 0;
};

// Nelder-Mead with standard coefficients (reflect 1, expand 2, contract 1/2,
// shrink 1/2); every trial vertex is projected coordinate-wise onto
// [0, 1]^n. Stops when the simplex diameter falls below tol or the
// evaluation budget is spent.
LocalSearchResult nelder_mead_bounded(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& start, double tol, long long max_evals);

// Gaussian-Parzen density over previously visited points (starts and local
// optima), diagonal bandwidth beta_o per normalized coordinate.
double parzen_density(const std::vector<Eigen::VectorXd>& history,
                      const Eigen::VectorXd& s, double beta_o);

// Probabilistic restart: of n_candidates uniform draws in [0, 1]^dim, the
// one the visited density rates lowest. An empty history degenerates to a
// uniform draw.
Eigen::VectorXd restart_point(const std::vector<Eigen::VectorXd>& history,
                              int dim, int n_candidates, double beta_o,
                              RngStream& rng);

struct GbnmConfig {
  long long nfe_budget = 0;
  double beta_o = 0.01;
  int n_candidates = 10;
  int nr_max = 50;
  double simplex_tol = 1e-4;
  long long max_local_evals = 100;
  BatchSchedule schedule;
  std::uint64_t seed = 0;
};

// Globalized bounded Nelder-Mead over the noisy objective: every query is an
// independent Monte Carlo estimate driven to matched_target, all queries
// share one evaluation budget, and restarts avoid the visited region via the
// Parzen density.
RunReport run_gbnm(const StochasticProblem& problem, double matched_target,
                   const GbnmConfig& config, RngStream& rng);

}  // namespace segopt
