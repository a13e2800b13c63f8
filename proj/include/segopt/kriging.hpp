#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "json.hpp"
#include "segopt/rng.hpp"

namespace segopt {

struct Hyperparameters {
  Eigen::VectorXd theta;  // length-scale weights, one per dimension
  Eigen::VectorXd p;      // exponents in [1, 2], one per dimension
};

struct FitOptions {
  int particles = 40;
  int iterations = 50;
  bool fit_p = false;       // when false, p is fixed at 2
  int polish_sweeps = 20;   // coordinate pattern-search refinement
  long long seed_hint = 0;  // unused by fit(); callers pass an RngStream
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Gaussian-process regression with a constant trend and a heteroscedastic
// noise diagonal (the intrinsic variances). Working matrix is
// A = Psi + diag(intrinsic) / sigma2, so the noise-free case reduces exactly
// to ordinary kriging. All designs are expected in normalized coordinates.
class Surrogate {
 public:
  Surrogate() = default;
  // Profiles mu/sigma2 at fixed hyperparameters and factorizes A. Escalates
  // a diagonal nugget (1e-10 .. 1e-6) only if the factorization fails.
  Surrogate(Eigen::MatrixXd plan, Eigen::VectorXd y, Eigen::VectorXd intrinsic,
            Hyperparameters hyper);

  double predict(const Eigen::VectorXd& d) const;
  // Prediction error variance when the point would be observed with noise
  // variance lambda_at_d (0 for a noise-free hypothetical).
  double mse(const Eigen::VectorXd& d, double lambda_at_d) const;

  int size() const { return static_cast<int>(y_.size()); }
  int dim() const { return static_cast<int>(plan_.cols()); }
  const Eigen::MatrixXd& plan() const { return plan_; }
  const Eigen::VectorXd& y() const { return y_; }
  const Eigen::VectorXd& intrinsic() const { return intrinsic_; }
  const Hyperparameters& hyper() const { return hyper_; }
  double mu_hat() const { return mu_hat_; }
  double sigma2_hat() const { return sigma2_hat_; }
  double nugget() const { return nugget_; }
  double log_likelihood() const { return loglik_; }

 private:
  Eigen::VectorXd corr_vector(const Eigen::VectorXd& d) const;

  Eigen::MatrixXd plan_;
  Eigen::VectorXd y_;
  Eigen::VectorXd intrinsic_;
  Hyperparameters hyper_;
  double mu_hat_ = 0.0;
  double sigma2_hat_ = 0.0;
  double nugget_ = 0.0;
  double loglik_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;     // A^{-1} (y - 1 mu)
  Eigen::VectorXd ainv_one_;  // A^{-1} 1
  double one_ainv_one_ = 0.0;
};

double correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                   const Hyperparameters& hyper);

// Concentrated log-likelihood of the profiled model at the given
// hyperparameters (the quantity fit() maximizes).
double profile_loglik(const Eigen::MatrixXd& plan, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& intrinsic,
                      const Hyperparameters& hyper);

// Maximum-likelihood fit: particle-swarm search over log10(theta) in
// [-3, 3]^n (and p in [1, 2] when enabled) followed by a coordinate-wise
// polish of the incumbent.
Surrogate fit(const Eigen::MatrixXd& plan, const Eigen::VectorXd& y,
              const Eigen::VectorXd& intrinsic, const FitOptions& options,
              RngStream& rng);

// Fit at caller-supplied hyperparameters (no search).
Surrogate fit_with(const Eigen::MatrixXd& plan, const Eigen::VectorXd& y,
                   const Eigen::VectorXd& intrinsic, const Hyperparameters& hyper);

nlohmann::json to_json(const Surrogate& model);

}  // namespace segopt
