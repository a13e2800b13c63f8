#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "segopt/rng.hpp"

namespace segopt {

// Rectangular design domain. Normalization maps onto the unit hypercube,
// which is the coordinate system every model-side computation works in.
struct DesignSpace {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  DesignSpace() = default;
  DesignSpace(Eigen::VectorXd lo, Eigen::VectorXd up);

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Eigen::VectorXd& d) const;

  // Throws if d is outside [lower, upper].
  Eigen::VectorXd normalize(const Eigen::VectorXd& d) const;
  // Throws if u is outside [0, 1]^n.
  Eigen::VectorXd denormalize(const Eigen::VectorXd& u) const;
};

enum class Marginal { kNormal, kGamma };

// One independent scalar variate. For kNormal, dispersion is the standard
// deviation; for kGamma it is the coefficient of variation and the draw is
// moment-matched: shape = 1/cov^2, scale = mean * cov^2.
struct MarginalSpec {
  Marginal family = Marginal::kNormal;
  double mean = 0.0;
  double dispersion = 0.0;
};

using RandomSpec = std::vector<MarginalSpec>;

void validate(const RandomSpec& spec);
Eigen::VectorXd draw(const RandomSpec& spec, RngStream& rng);

// Stratified Latin hypercube: each column is an independent random
// permutation of the strata with one uniform jitter per cell. Coordinates
// are strictly inside (0, 1).
Eigen::MatrixXd lhs_plan(int n_points, int n_dims, RngStream& rng);

}  // namespace segopt
