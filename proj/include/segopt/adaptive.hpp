#pragma once

#include <Eigen/Dense>

#include "segopt/mci.hpp"

namespace segopt {

struct AdaptiveConfig {
  double sigma2_target = 1.0;
  double sigma2_min = 1e-6;
  double r_hc = 0.1;  // closeness radius in normalized max-norm
  double a1 = 0.5;
  double a2 = 0.5;
  double a3 = 0.5;
  double a4 = 0.01;
  BatchSchedule schedule;
};

enum class PointStatus { kInPlan, kNewInfill };

// Number of plan points within max-norm r_hc of q (inclusive).
int count_close(const Eigen::MatrixXd& plan, const Eigen::VectorXd& q, double r_hc);

// Decay exponent g(n, n_close) = a1 + a2 n + a3 n_close - a4 n_close n.
double decay_exponent(int n, int n_close, const AdaptiveConfig& config);

// sigma2_target * exp(-g), clamped to [sigma2_min, sigma2_target].
double adaptive_target(int n, int n_close, const AdaptiveConfig& config);

// Target variance assigned to a point: the full target in unexplored
// territory (n_close = 0), the decayed target where sampled points crowd in.
double lambda_for(PointStatus status, int n_close, int n, const AdaptiveConfig& config);

}  // namespace segopt
