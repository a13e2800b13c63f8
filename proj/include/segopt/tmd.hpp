#pragma once

#include <Eigen/Dense>
#include <string>

#include "segopt/problems.hpp"

namespace segopt {

// Shear frame with a tuned mass damper on the top floor. Vectors hold the
// per-story values bottom to top; the damper couples to story N.
struct StructureRealization {
  Eigen::VectorXd story_m;  // kg
  Eigen::VectorXd story_c;  // N.s/m
  Eigen::VectorXd story_k;  // N/m
  double tmd_m = 0.0;
  double tmd_c = 0.0;
  double tmd_k = 0.0;

  int stories() const { return static_cast<int>(story_m.size()); }
};

struct ExcitationSpec {
  double s0 = 1e-3;       // bedrock spectral amplitude [m^2/s^3]
  double omega_f = 37.3;  // ground frequency [rad/s]
  double xi_f = 0.6;      // ground damping
};

struct ReliabilitySpec {
  double barrier = 0.075;   // top-floor drift limit [m]
  double t_design = 50.0;   // structure life [years]
  double nu = 0.1;          // earthquake arrival rate [1/year]
  double t_event = 50.0;    // event duration [s]
};

enum class Barrier { kH300, kH400, kH500 };
Barrier parse_barrier(const std::string& tag);
double barrier_height(Barrier barrier);  // drift limit in meters, h = 30 m

Eigen::MatrixXd assemble_mass(const StructureRealization& r);
Eigen::MatrixXd assemble_damping(const StructureRealization& r);
Eigen::MatrixXd assemble_stiffness(const StructureRealization& r);

double kanai_tajimi_psd(double omega, const ExcitationSpec& spec);

// Solves A X + X A^T + Q = 0 (Bartels-Stewart on the complex Schur form).
// Requires that no two eigenvalues of A sum to zero; a stable A qualifies.
Eigen::MatrixXd solve_continuous_lyapunov(const Eigen::MatrixXd& a,
                                          const Eigen::MatrixXd& q);

struct ResponseStats {
  bool stable = false;
  double sigma_z = 0.0;     // top-floor displacement std [m]
  double sigma_zdot = 0.0;  // top-floor velocity std [m/s]
};

// Stationary response under Kanai-Tajimi filtered white noise: the filter
// states augment (z, zdot), the bedrock channel carries white noise of
// intensity 2*pi*S0, and the covariance solves the Lyapunov equation.
ResponseStats response_stats(const StructureRealization& r, const ExcitationSpec& spec);

// Rice rate of upward crossings of level b for a stationary Gaussian
// process with the given standard deviations.
double upcrossing_rate(double sigma_z, double sigma_zdot, double b);

// Probability that at least one crossing occurs during one event (Poisson
// crossings, symmetric barrier).
double event_failure_probability(double rate, double t_event);

// Lifetime failure probability under Poisson event arrivals; closed form of
// the total-probability series.
double failure_probability(double p_event, double nu, double t_design);

// Generalized reliability index, P_f clamped to [1e-15, 1 - 1e-15].
double reliability_index(double p_f);

// One noisy observation of the objective -beta(d, x). x carries the story
// properties (10 k, 10 m, 10 c) and optionally the damper mass as a 31st
// entry; damper stiffness/damping come from d, clipped away from zero. An
// unstable realization scores beta = -10.
double tmd_phi(const Eigen::VectorXd& d, const Eigen::VectorXd& x,
               const ExcitationSpec& exc, const ReliabilitySpec& rel);

// Registry problem: d = (k_d, c_d) in [0, 4e6] N/m x [0, 1e6] N.s/m. With
// random_tmd_mass the sampler draws the damper mass as an internal 31st
// variate; the advertised stochastic dimension stays 30.
StochasticProblem make_tmd_problem(Barrier barrier, bool random_tmd_mass = true);

}  // namespace segopt
