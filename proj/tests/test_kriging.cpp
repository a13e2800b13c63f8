#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "oracles/det_kriging.hpp"
#include "segopt/kriging.hpp"
#include "segopt/rng.hpp"
#include "segopt/sampling.hpp"

using namespace segopt;

namespace {

// Random noise-free instance with a conditioning gate so plain-inverse
// arithmetic in the oracle stays trustworthy.
struct DetInstance {
  Eigen::MatrixXd plan;
  Eigen::VectorXd y;
  Hyperparameters hyper;
  oracle::DetKriging ref;
};

DetInstance random_det_instance(RngStream& rng, int dims, int m) {
  for (;;) {
    DetInstance inst;
    inst.plan.resize(m, dims);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < dims; ++j) inst.plan(i, j) = rng.uniform();
    inst.y.resize(m);
    for (int i = 0; i < m; ++i) inst.y[i] = rng.normal(0.0, 2.0);
    inst.hyper.theta.resize(dims);
    inst.hyper.p = Eigen::VectorXd::Constant(dims, 2.0);
    for (int j = 0; j < dims; ++j)
      inst.hyper.theta[j] = std::pow(10.0, rng.uniform(0.0, 1.5));

    inst.ref.plan = inst.plan;
    inst.ref.y = inst.y;
    inst.ref.theta = inst.hyper.theta;
    inst.ref.p = inst.hyper.p;
    inst.ref.build();
    // A negative smallest eigenvalue means the plain inverse is garbage, so
    // the ratio gate alone would wave through singular instances.
    if (inst.ref.condition > 0.0 && inst.ref.condition <= 1e4) return inst;
  }
}

double mixed_gap(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

}  // namespace

TEST_CASE("correlation kernel anchor values") {
  Hyperparameters h;
  h.theta = Eigen::VectorXd::Constant(1, 1.0);
  h.p = Eigen::VectorXd::Constant(1, 2.0);
  const Eigen::VectorXd a = Eigen::VectorXd::Constant(1, 0.2);
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(1, 1.2);
  CHECK(correlation(a, a, h) == 1.0);
  CHECK(correlation(a, b, h) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  RngStream rng(3);
  Hyperparameters h3;
  h3.theta = Eigen::Vector3d(0.5, 2.0, 7.0);
  h3.p = Eigen::Vector3d(2.0, 1.5, 1.0);
  for (int i = 0; i < 20; ++i) {
    Eigen::Vector3d u(rng.uniform(), rng.uniform(), rng.uniform());
    Eigen::Vector3d v(rng.uniform(), rng.uniform(), rng.uniform());
    const double fwd = correlation(u, v, h3);
    CHECK(fwd == correlation(v, u, h3));
    CHECK(fwd > 0.0);
    CHECK(fwd <= 1.0);
  }
}

TEST_CASE("noise-free surrogate reduces to ordinary kriging") {
  RngStream rng(101);
  int checked = 0;
  while (checked < 50) {
    const int dims = 1 + static_cast<int>(rng.next_below(3));
    const int m = 5 + static_cast<int>(rng.next_below(8));
    DetInstance inst = random_det_instance(rng, dims, m);
    Surrogate model =
        fit_with(inst.plan, inst.y, Eigen::VectorXd::Zero(m), inst.hyper);
    if (model.nugget() != 0.0) continue;  // conditioning fallback, not the formula path

    CHECK(mixed_gap(model.mu_hat(), inst.ref.mu) <= 1e-10);
    CHECK(mixed_gap(model.sigma2_hat(), inst.ref.sigma2) <= 1e-10);
    for (int probe = 0; probe < 5; ++probe) {
      Eigen::VectorXd d(dims);
      for (int j = 0; j < dims; ++j) d[j] = rng.uniform();
      CHECK(mixed_gap(model.predict(d), inst.ref.predict(d)) <= 1e-10);
      // The error variance is sigma2 times a small correction, so roundoff in
      // either evaluator is proportional to sigma2, not to the result.
      CHECK(std::abs(model.mse(d, 0.0) - std::max(0.0, inst.ref.mse(d))) <=
            1e-10 * std::max({1.0, inst.ref.sigma2, inst.ref.mse(d)}));
    }
    // Error vanishes exactly where data exists.
    for (int i = 0; i < m; ++i)
      CHECK(model.mse(inst.plan.row(i), 0.0) <=
            1e-10 * std::max(1.0, model.sigma2_hat()));
    ++checked;
  }
}

TEST_CASE("constant data collapses to its trend") {
  RngStream rng(11);
  Eigen::MatrixXd plan = lhs_plan(6, 1, rng);
  Eigen::VectorXd y = Eigen::VectorXd::Constant(6, 3.7);
  Surrogate model = fit(plan, y, Eigen::VectorXd::Zero(6), FitOptions{}, rng);
  // Constant data drives theta to its floor, so the correlation matrix is
  // nearly singular and the trend solve keeps only ~single precision.
  CHECK(model.mu_hat() == doctest::Approx(3.7).epsilon(1e-6));
  CHECK(model.sigma2_hat() <= 1e-10 * 3.7 + 1e-10);
  CHECK(model.predict(Eigen::VectorXd::Constant(1, 0.33)) ==
        doctest::Approx(3.7).epsilon(1e-8));
}

TEST_CASE("noise-free fit interpolates its data") {
  RngStream rng(23);
  Eigen::MatrixXd plan = lhs_plan(8, 1, rng);
  Eigen::VectorXd y(8);
  for (int i = 0; i < 8; ++i) y[i] = std::sin(2.0 * M_PI * plan(i, 0));
  Surrogate model = fit(plan, y, Eigen::VectorXd::Zero(8), FitOptions{}, rng);
  for (int i = 0; i < 8; ++i) {
    const double gap = std::abs(model.predict(plan.row(i)) - y[i]);
    CHECK(gap <= 1e-6 * std::max(1.0, std::abs(y[i])));
  }
  // Far extrapolation reverts to the trend.
  Hyperparameters tight = model.hyper();
  const double far = model.predict(Eigen::VectorXd::Constant(1, 40.0));
  CHECK(far == doctest::Approx(model.mu_hat()).epsilon(1e-6));
  (void)tight;
}

TEST_CASE("noisy duplicates are smoothed between their observations") {
  Eigen::MatrixXd plan(5, 1);
  plan << 0.1, 0.4, 0.4, 0.4, 0.9;
  Eigen::VectorXd y(5);
  y << 0.0, 1.0, 2.0, 1.5, 0.5;
  Eigen::VectorXd intrinsic = Eigen::VectorXd::Constant(5, 0.5);
  Hyperparameters h;
  h.theta = Eigen::VectorXd::Constant(1, 5.0);
  h.p = Eigen::VectorXd::Constant(1, 2.0);
  Surrogate model = fit_with(plan, y, intrinsic, h);
  const double at_dup = model.predict(Eigen::VectorXd::Constant(1, 0.4));
  CHECK(at_dup >= 1.0);
  CHECK(at_dup <= 2.0);
}

TEST_CASE("mse dominates the assigned noise floor at sampled points") {
  RngStream rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    const int m = 6 + static_cast<int>(rng.next_below(5));
    Eigen::MatrixXd plan = lhs_plan(m, 2, rng);
    Eigen::VectorXd y(m);
    Eigen::VectorXd intrinsic(m);
    for (int i = 0; i < m; ++i) {
      y[i] = rng.normal(0.0, 1.0);
      intrinsic[i] = rng.uniform(1e-3, 0.3);
    }
    Hyperparameters h;
    h.theta = Eigen::Vector2d(std::pow(10.0, rng.uniform(-0.5, 1.0)),
                              std::pow(10.0, rng.uniform(-0.5, 1.0)));
    h.p = Eigen::VectorXd::Constant(2, 2.0);
    Surrogate model = fit_with(plan, y, intrinsic, h);
    for (int i = 0; i < m; ++i)
      CHECK(model.mse(plan.row(i), intrinsic[i]) >= intrinsic[i] - 1e-8);
  }
}

TEST_CASE("predictions are invariant under plan reordering") {
  RngStream rng(41);
  Eigen::MatrixXd plan = lhs_plan(9, 2, rng);
  Eigen::VectorXd y(9);
  Eigen::VectorXd intrinsic(9);
  for (int i = 0; i < 9; ++i) {
    y[i] = rng.normal(0.0, 1.0);
    intrinsic[i] = rng.uniform(0.0, 0.1);
  }
  Hyperparameters h;
  h.theta = Eigen::Vector2d(3.0, 8.0);
  h.p = Eigen::VectorXd::Constant(2, 2.0);
  Surrogate base = fit_with(plan, y, intrinsic, h);

  std::vector<int> perm = {4, 0, 7, 2, 8, 1, 5, 3, 6};
  Eigen::MatrixXd plan_p(9, 2);
  Eigen::VectorXd y_p(9);
  Eigen::VectorXd intrinsic_p(9);
  for (int i = 0; i < 9; ++i) {
    plan_p.row(i) = plan.row(perm[i]);
    y_p[i] = y[perm[i]];
    intrinsic_p[i] = intrinsic[perm[i]];
  }
  Surrogate shuffled = fit_with(plan_p, y_p, intrinsic_p, h);
  for (int probe = 0; probe < 20; ++probe) {
    Eigen::Vector2d d(rng.uniform(), rng.uniform());
    CHECK(std::abs(base.predict(d) - shuffled.predict(d)) <= 1e-9);
    CHECK(std::abs(base.mse(d, 0.0) - shuffled.mse(d, 0.0)) <= 1e-9);
  }
}

TEST_CASE("fitted likelihood beats random hyperparameter probes") {
  RngStream rng(53);
  Eigen::MatrixXd plan = lhs_plan(10, 2, rng);
  Eigen::VectorXd y(10);
  for (int i = 0; i < 10; ++i)
    y[i] = std::sin(3.0 * plan(i, 0)) + 0.5 * std::cos(5.0 * plan(i, 1));
  Eigen::VectorXd intrinsic = Eigen::VectorXd::Constant(10, 1e-3);
  Surrogate model = fit(plan, y, intrinsic, FitOptions{}, rng);
  for (int probe = 0; probe < 20; ++probe) {
    Hyperparameters h;
    h.theta = Eigen::Vector2d(std::pow(10.0, rng.uniform(-3.0, 3.0)),
                              std::pow(10.0, rng.uniform(-3.0, 3.0)));
    h.p = Eigen::VectorXd::Constant(2, 2.0);
    CHECK(profile_loglik(plan, y, intrinsic, h) <= model.log_likelihood() + 1e-9);
  }
}

TEST_CASE("mse stays finite and nonnegative on a dense sweep") {
  RngStream rng(61);
  Eigen::MatrixXd plan = lhs_plan(7, 1, rng);
  Eigen::VectorXd y(7);
  Eigen::VectorXd intrinsic(7);
  for (int i = 0; i < 7; ++i) {
    y[i] = rng.normal(0.0, 1.0);
    intrinsic[i] = rng.uniform(0.0, 0.05);
  }
  Surrogate model = fit(plan, y, intrinsic, FitOptions{}, rng);
  for (int g = 0; g <= 200; ++g) {
    const Eigen::VectorXd d = Eigen::VectorXd::Constant(1, g / 200.0);
    const double m0 = model.mse(d, 0.0);
    const double m1 = model.mse(d, 1e-2);
    CHECK(std::isfinite(m0));
    CHECK(m0 >= 0.0);
    CHECK(m1 >= m0);
  }
}

TEST_CASE("degenerate inputs are rejected") {
  Eigen::MatrixXd one_point(1, 1);
  one_point << 0.5;
  Hyperparameters h;
  h.theta = Eigen::VectorXd::Constant(1, 1.0);
  h.p = Eigen::VectorXd::Constant(1, 2.0);
  CHECK_THROWS(fit_with(one_point, Eigen::VectorXd::Constant(1, 1.0),
                        Eigen::VectorXd::Zero(1), h));

  Eigen::MatrixXd plan(3, 1);
  plan << 0.1, 0.5, 0.9;
  Eigen::VectorXd y(3);
  y << 1.0, 2.0, 3.0;
  CHECK_THROWS(fit_with(plan, y, Eigen::VectorXd::Constant(3, -1.0), h));
}

TEST_CASE("model dump carries the fitted state") {
  RngStream rng(71);
  Eigen::MatrixXd plan = lhs_plan(5, 1, rng);
  Eigen::VectorXd y(5);
  for (int i = 0; i < 5; ++i) y[i] = rng.normal(0.0, 1.0);
  Surrogate model = fit(plan, y, Eigen::VectorXd::Zero(5), FitOptions{}, rng);
  nlohmann::json j = to_json(model);
  CHECK(j.contains("plan"));
  CHECK(j.contains("y"));
  CHECK(j.contains("theta"));
  CHECK(j["mu"].get<double>() == model.mu_hat());
  CHECK(j["sigma2"].get<double>() == model.sigma2_hat());
  CHECK(j["size"].get<int>() == 5);
}
