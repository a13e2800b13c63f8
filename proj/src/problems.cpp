#include "segopt/problems.hpp"

#include <cmath>
#include <stdexcept>

#include "segopt/tmd.hpp"

namespace segopt {
namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

RandomSpec unit_normals(int count, double sigma) {
  RandomSpec spec(count);
  for (auto& m : spec) {
    m.family = Marginal::kNormal;
    m.mean = 1.0;
    m.dispersion = sigma;
  }
  return spec;
}

// Hartman-6 constants.
const double kHartmanP[4] = {1.0, 1.2, 3.0, 3.2};
const double kHartmanA[4][6] = {
    {10.0, 3.0, 17.0, 3.5, 1.7, 8.0},
    {0.05, 10.0, 17.0, 0.1, 8.0, 14.0},
    {3.0, 3.5, 1.7, 10.0, 17.0, 8.0},
    {17.0, 8.0, 0.05, 10.0, 0.1, 14.0}};
const double kHartmanQ[4][6] = {
    {0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
    {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
    {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
    {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381}};

double hartman6_core(const Eigen::VectorXd& z, const double a_scale[4][6],
                     const double q_scale[4][6]) {
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    double expo = 0.0;
    for (int j = 0; j < 6; ++j) {
      double diff = z[j] - q_scale[i][j];
      expo += a_scale[i][j] * diff * diff;
    }
    total -= kHartmanP[i] * std::exp(-expo);
  }
  return total;
}

}  // namespace

StochasticProblem::StochasticProblem(std::string name, DesignSpace space,
                                     RandomSpec random, Phi phi, Mean exact_mean,
                                     int public_n_x)
    : name_(std::move(name)), space_(std::move(space)), random_(std::move(random)),
      phi_(std::move(phi)), exact_mean_(std::move(exact_mean)) {
  validate(random_);
  if (!phi_) throw std::invalid_argument("StochasticProblem: missing integrand");
  n_x_ = public_n_x >= 0 ? public_n_x : static_cast<int>(random_.size());
}

double StochasticProblem::eval_phi(const Eigen::VectorXd& d,
                                   const Eigen::VectorXd& x) const {
  counter_->fetch_add(1, std::memory_order_relaxed);
  return phi_(d, x);
}

double StochasticProblem::exact_mean(const Eigen::VectorXd& d) const {
  if (!exact_mean_) throw std::logic_error("StochasticProblem: no closed-form mean");
  return exact_mean_(d);
}

double phi_forrester1d(const Eigen::VectorXd& d, const Eigen::VectorXd& x) {
  return -(1.4 - 3.0 * d[0]) * std::sin(18.0 * d[0]) * x[0];
}

double phi_branin_tilted(const Eigen::VectorXd& d, const Eigen::VectorXd& x) {
  const double pi = 3.141592653589793238462643383280;
  const double p1 = 1.0;
  const double p2 = 5.1 / (4.0 * pi * pi);
  const double p3 = 5.0 / pi;
  const double p4 = 6.0;
  const double p5 = 10.0;
  const double p6 = 1.0 / (8.0 * pi);
  double d1 = d[0], d2 = d[1];
  double quad = d2 - p2 * d1 * d1 + p3 * d1 - p4;
  return p1 * quad * quad * x[0] + p5 * (1.0 - p6) * std::cos(d1) * x[1] + p5 +
         5.0 * d1;
}

double phi_hartman6(const Eigen::VectorXd& d, const Eigen::VectorXd& x) {
  Eigen::VectorXd z(6);
  for (int j = 0; j < 6; ++j) z[j] = d[j] * x[j];
  return hartman6_core(z, kHartmanA, kHartmanQ);
}

double phi_hartman6_hd(const Eigen::VectorXd& d, const Eigen::VectorXd& x) {
  // x packs [x_d(6), x_A(24, row-major), x_P(24, row-major)].
  Eigen::VectorXd z(6);
  for (int j = 0; j < 6; ++j) z[j] = d[j] * x[j];
  double a_scale[4][6], q_scale[4][6];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 6; ++j) {
      a_scale[i][j] = kHartmanA[i][j] * x[6 + 6 * i + j];
      q_scale[i][j] = kHartmanQ[i][j] * x[30 + 6 * i + j];
    }
  return hartman6_core(z, a_scale, q_scale);
}

double phi_levy10(const Eigen::VectorXd& d, const Eigen::VectorXd& x) {
  const double pi = 3.141592653589793238462643383280;
  const int n = 10;
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = 1.0 + d[i] * x[i] / 4.0;
  double s0 = std::sin(pi * w[0]);
  double total = s0 * s0;
  for (int i = 0; i < n - 1; ++i) {
    double si = std::sin(pi * w[i] + 1.0);
    total += (w[i] - 1.0) * (w[i] - 1.0) * (1.0 + 10.0 * si * si);
  }
  double sn = std::sin(2.0 * pi * w[n - 1]);
  total += (w[n - 1] - 1.0) * (w[n - 1] - 1.0) * (1.0 + sn * sn);
  return total;
}

StochasticProblem make_problem(const std::string& name, double sigma_x,
                               const std::string& barrier) {
  auto sigma_or = [&](double fallback) {
    return std::isnan(sigma_x) ? fallback : sigma_x;
  };

  if (name == "1d") {
    double s = sigma_or(0.1);
    DesignSpace space{Eigen::VectorXd::Constant(1, 0.0),
                      Eigen::VectorXd::Constant(1, 1.2)};
    return StochasticProblem(
        name, space, unit_normals(1, s), phi_forrester1d,
        [](const Eigen::VectorXd& d) {
          return -(1.4 - 3.0 * d[0]) * std::sin(18.0 * d[0]);
        });
  }
  if (name == "branin") {
    double s = sigma_or(0.05);
    DesignSpace space{vec2(-5.0, 0.0), vec2(10.0, 15.0)};
    return StochasticProblem(
        name, space, unit_normals(2, s), phi_branin_tilted,
        [](const Eigen::VectorXd& d) {
          return phi_branin_tilted(d, Eigen::VectorXd::Ones(2));
        });
  }
  if (name == "hartman6") {
    double s = sigma_or(0.05);
    DesignSpace space{Eigen::VectorXd::Zero(6), Eigen::VectorXd::Ones(6)};
    return StochasticProblem(name, space, unit_normals(6, s), phi_hartman6);
  }
  if (name == "hartman6-hd") {
    double s = sigma_or(0.05);
    RandomSpec spec = unit_normals(6, s);
    RandomSpec matrix_part = unit_normals(48, 0.01);
    spec.insert(spec.end(), matrix_part.begin(), matrix_part.end());
    DesignSpace space{Eigen::VectorXd::Zero(6), Eigen::VectorXd::Ones(6)};
    return StochasticProblem(name, space, std::move(spec), phi_hartman6_hd);
  }
  if (name == "levy10") {
    double s = sigma_or(0.01);
    DesignSpace space{Eigen::VectorXd::Constant(10, -10.0),
                      Eigen::VectorXd::Constant(10, 10.0)};
    return StochasticProblem(name, space, unit_normals(10, s), phi_levy10);
  }
  if (name == "tmd") {
    return make_tmd_problem(parse_barrier(barrier));
  }
  throw std::invalid_argument("make_problem: unknown problem '" + name + "'");
}

}  // namespace segopt
