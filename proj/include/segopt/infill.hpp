#pragma once

#include <Eigen/Dense>
#include <functional>

#include "segopt/kriging.hpp"
#include "segopt/rng.hpp"

namespace segopt {

struct InfillProposal {
  Eigen::VectorXd point;  // normalized coordinates
  double aei = 0.0;
  bool flat = false;  // acquisition was degenerate, point drawn uniformly
};

struct InnerOptions {
  int probes_per_dim = 200;  // uniform probes = probes_per_dim * dim
  int starts = 5;            // local searches seeded from the best probes
  int local_evals = 120;     // per local search
  double local_tol = 1e-7;
};

// Index of the sampled point minimizing yhat + alpha * s_n, with s_n taken
// at each point's own intrinsic variance.
int effective_best(const Surrogate& model, double alpha);

// Closed-form E[max(0, y_star - Y)] for Y ~ N(y_hat, s^2).
double expected_improvement(double y_hat, double s, double y_star);

// Improvement against the effective-best prediction, discounted by
// 1 - sqrt(lambda) / sqrt(s_n^2 + lambda) so that replication noise keeps a
// fully-resolved point from being re-drilled.
double aei(const Surrogate& model, const Eigen::VectorXd& d, double lambda_at_d,
           double alpha);
double aei_given_best(const Surrogate& model, const Eigen::VectorXd& d,
                      double lambda_at_d, double y_star);

// Maximizes the acquisition over the unit hypercube: dense uniform probing,
// bounded local polish from the best probes, and a fresh-probe certification
// of the winner. A flat acquisition surface falls back to a uniform draw.
InfillProposal maximize_aei(const Surrogate& model,
                            const std::function<double(const Eigen::VectorXd&)>& lambda_fn,
                            double alpha, const InnerOptions& options,
                            RngStream& rng);

}  // namespace segopt
