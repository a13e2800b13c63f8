#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <functional>
#include <limits>
#include <memory>
#include <string>

#include "segopt/sampling.hpp"

namespace segopt {

// A noisy objective: phi(d, x) is one realization of the integrand at design
// d under one draw x of the random inputs. The optimization target is
// J(d) = E_x[phi(d, x)]. Every phi call is tallied; that count is the NFE
// ground truth for budget accounting.
class StochasticProblem {
 public:
  using Phi = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;
  using Mean = std::function<double(const Eigen::VectorXd&)>;

  StochasticProblem() = default;
  StochasticProblem(std::string name, DesignSpace space, RandomSpec random,
                    Phi phi, Mean exact_mean = nullptr, int public_n_x = -1);

  const std::string& name() const { return name_; }
  int dim() const { return space_.dim(); }
  // Advertised stochastic dimension; draw() may use more variates internally.
  int n_x() const { return n_x_; }
  const DesignSpace& space() const { return space_; }
  const RandomSpec& random() const { return random_; }

  double eval_phi(const Eigen::VectorXd& d, const Eigen::VectorXd& x) const;
  bool has_exact_mean() const { return static_cast<bool>(exact_mean_); }
  double exact_mean(const Eigen::VectorXd& d) const;

  long long evals() const { return counter_->load(); }
  void reset_evals() { counter_->store(0); }

 private:
  std::string name_;
  DesignSpace space_;
  RandomSpec random_;
  Phi phi_;
  Mean exact_mean_;
  int n_x_ = 0;
  std::shared_ptr<std::atomic<long long>> counter_ =
      std::make_shared<std::atomic<long long>>(0);
};

// Benchmark integrands (design in original units, x as drawn).
double phi_forrester1d(const Eigen::VectorXd& d, const Eigen::VectorXd& x);
double phi_branin_tilted(const Eigen::VectorXd& d, const Eigen::VectorXd& x);
double phi_hartman6(const Eigen::VectorXd& d, const Eigen::VectorXd& x);
double phi_hartman6_hd(const Eigen::VectorXd& d, const Eigen::VectorXd& x);
double phi_levy10(const Eigen::VectorXd& d, const Eigen::VectorXd& x);

// Registry: "1d", "branin", "hartman6", "hartman6-hd", "levy10", "tmd".
// sigma_x scales the primary multiplicative noise; NaN selects the
// per-problem default. For "tmd", barrier selects the drift limit
// ("h300" | "h400" | "h500") and sigma_x is ignored (dispersions are fixed
// physical values).
StochasticProblem make_problem(const std::string& name,
                               double sigma_x = std::numeric_limits<double>::quiet_NaN(),
                               const std::string& barrier = "h400");

}  // namespace segopt
