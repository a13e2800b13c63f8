#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "oracles/sdof_sim.hpp"
#include "oracles/series.hpp"
#include "segopt/stats.hpp"
#include "segopt/tmd.hpp"

using namespace segopt;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

StructureRealization mean_frame(double tmd_k, double tmd_c) {
  StructureRealization r;
  r.story_k = Eigen::VectorXd::Constant(10, 650.0e6);
  r.story_m = Eigen::VectorXd::Constant(10, 360.0e3);
  r.story_c = Eigen::VectorXd::Constant(10, 6.20e6);
  r.tmd_m = 108.0e3;
  r.tmd_k = tmd_k;
  r.tmd_c = tmd_c;
  return r;
}

Eigen::VectorXd mean_variates() {
  Eigen::VectorXd x(30);
  x.segment(0, 10).setConstant(650.0e6);
  x.segment(10, 10).setConstant(360.0e3);
  x.segment(20, 10).setConstant(6.20e6);
  return x;
}

}  // namespace

TEST_CASE("chain assembly on a one-story frame") {
  StructureRealization r;
  r.story_k = Eigen::VectorXd::Constant(1, 5.0);
  r.story_m = Eigen::VectorXd::Constant(1, 2.0);
  r.story_c = Eigen::VectorXd::Constant(1, 3.0);
  r.tmd_m = 0.5;
  r.tmd_k = 2.0;
  r.tmd_c = 1.0;

  Eigen::MatrixXd k = assemble_stiffness(r);
  REQUIRE(k.rows() == 2);
  CHECK(k(0, 0) == doctest::Approx(7.0));
  CHECK(k(0, 1) == doctest::Approx(-2.0));
  CHECK(k(1, 0) == doctest::Approx(-2.0));
  CHECK(k(1, 1) == doctest::Approx(2.0));

  Eigen::MatrixXd m = assemble_mass(r);
  CHECK(m(0, 0) == doctest::Approx(2.0));
  CHECK(m(1, 1) == doctest::Approx(0.5));
  CHECK(m(0, 1) == 0.0);

  Eigen::MatrixXd c = assemble_damping(r);
  CHECK(c(0, 0) == doctest::Approx(4.0));
  CHECK(c(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("ten-story assembly is symmetric positive definite") {
  StructureRealization r = mean_frame(3.0e6, 0.15e6);
  for (const Eigen::MatrixXd& mat :
       {assemble_mass(r), assemble_damping(r), assemble_stiffness(r)}) {
    REQUIRE(mat.rows() == 11);
    CHECK((mat - mat.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::LLT<Eigen::MatrixXd> llt(mat);
    CHECK(llt.info() == Eigen::Success);
  }
  // The damper row carries no ground connection.
  Eigen::MatrixXd k = assemble_stiffness(r);
  CHECK(k.row(10).sum() == doctest::Approx(0.0).scale(k(10, 10)));

  StructureRealization bad = r;
  bad.tmd_c = 0.0;
  CHECK_THROWS(assemble_damping(bad));
}

TEST_CASE("ground filter spectrum anchors") {
  ExcitationSpec spec;
  spec.s0 = 1e-3;
  spec.omega_f = 37.3;
  spec.xi_f = 0.6;
  CHECK(kanai_tajimi_psd(0.0, spec) == doctest::Approx(spec.s0).epsilon(1e-14));
  // At the filter frequency the ratio is (1 + 4 xi^2) / (4 xi^2).
  CHECK(kanai_tajimi_psd(spec.omega_f, spec) ==
        doctest::Approx(spec.s0 * 2.44 / 1.44).epsilon(1e-12));
  CHECK(kanai_tajimi_psd(1e5, spec) < 1e-6 * spec.s0);
}

TEST_CASE("lyapunov solver on closed forms") {
  Eigen::MatrixXd a(1, 1), q(1, 1);
  a << -0.5;
  q << 1.0;
  Eigen::MatrixXd x = solve_continuous_lyapunov(a, q);
  CHECK(x(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

  // Damped oscillator driven by white noise in the velocity channel.
  const double w0 = 3.7, zeta = 0.12, wht = 0.8;
  Eigen::MatrixXd a2(2, 2), q2(2, 2);
  a2 << 0.0, 1.0, -w0 * w0, -2.0 * zeta * w0;
  q2 << 0.0, 0.0, 0.0, wht;
  Eigen::MatrixXd x2 = solve_continuous_lyapunov(a2, q2);
  CHECK(x2(0, 0) == doctest::Approx(wht / (4.0 * zeta * w0 * w0 * w0)).epsilon(1e-6));
  CHECK(x2(1, 1) == doctest::Approx(wht / (4.0 * zeta * w0)).epsilon(1e-6));
  CHECK(std::abs(x2(0, 1)) <= 1e-10 * x2(1, 1));

  // Undamped oscillator has eigenvalues +-i w, an excluded pair.
  Eigen::MatrixXd a3(2, 2);
  a3 << 0.0, 1.0, -1.0, 0.0;
  CHECK_THROWS(solve_continuous_lyapunov(a3, Eigen::MatrixXd::Identity(2, 2)));
  CHECK_THROWS(solve_continuous_lyapunov(a2, Eigen::MatrixXd::Identity(3, 3)));
}

TEST_CASE("lyapunov solver on random stable systems") {
  RngStream rng(314);
  for (int t = 0; t < 12; ++t) {
    const int n = 2 + static_cast<int>(rng.next_below(6));
    Eigen::MatrixXd r(n, n), b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        r(i, j) = rng.normal(0.0, 1.0);
        b(i, j) = rng.normal(0.0, 1.0);
      }
    double shift = Eigen::EigenSolver<Eigen::MatrixXd>(r, false)
                       .eigenvalues()
                       .real()
                       .maxCoeff();
    Eigen::MatrixXd a = r - (shift + 0.5) * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd q = b * b.transpose();

    Eigen::MatrixXd x = solve_continuous_lyapunov(a, q);
    CHECK((x - x.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + x.cwiseAbs().maxCoeff()));
    double resid = (a * x + x * a.transpose() + q).cwiseAbs().maxCoeff();
    CHECK(resid <= 1e-8 * std::max(1.0, q.cwiseAbs().maxCoeff()));
    double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(x)
                         .eigenvalues()
                         .minCoeff();
    CHECK(min_eig >= -1e-8 * std::max(1.0, x.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("stationary response of the mean frame") {
  ExcitationSpec exc;
  ResponseStats stats = response_stats(mean_frame(2.963e6, 0.152e6), exc);
  REQUIRE(stats.stable);
  CHECK(stats.sigma_z > 1e-4);
  CHECK(stats.sigma_z < 1.0);
  CHECK(stats.sigma_zdot > 1e-3);
  CHECK(stats.sigma_zdot < 10.0);
  // Displacement scale sits well below the velocity scale for a stiff frame.
  CHECK(stats.sigma_z < stats.sigma_zdot);
}

TEST_CASE("rice rate formula and simulation") {
  const double w0 = kTwoPi, zeta = 0.1, wht = 1.0;
  const double sz = std::sqrt(wht / (4.0 * zeta * w0 * w0 * w0));
  const double sv = std::sqrt(wht / (4.0 * zeta * w0));

  CHECK(upcrossing_rate(sz, sv, 0.0) == doctest::Approx((sv / sz) / kTwoPi).epsilon(1e-14));
  CHECK(upcrossing_rate(sz, sv, sz) ==
        doctest::Approx((sv / sz) / kTwoPi * std::exp(-0.5)).epsilon(1e-14));
  CHECK_THROWS(upcrossing_rate(0.0, sv, 0.1));
  CHECK_THROWS(upcrossing_rate(sz, -1.0, 0.1));

  double sim = oracle::simulated_upcrossing_rate(w0, zeta, wht, sz, 3000.0, 0.002,
                                                 50.0, 991);
  double analytic = upcrossing_rate(sz, sv, sz);
  CHECK(std::abs(sim - analytic) <= 0.2 * analytic);
}

TEST_CASE("event and lifetime failure probabilities") {
  CHECK(event_failure_probability(0.0, 50.0) == 0.0);
  CHECK(event_failure_probability(0.03, 50.0) ==
        doctest::Approx(1.0 - std::exp(-3.0)).epsilon(1e-14));
  CHECK_THROWS(event_failure_probability(-1.0, 50.0));

  CHECK(failure_probability(1.0, 0.1, 50.0) ==
        doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-12));
  CHECK(failure_probability(0.0, 0.1, 50.0) == 0.0);
  CHECK_THROWS(failure_probability(1.5, 0.1, 50.0));
  CHECK_THROWS(failure_probability(0.5, -0.1, 50.0));

  // The closed form matches the total-probability series over event counts.
  RngStream rng(2718);
  for (int t = 0; t < 100; ++t) {
    double p = rng.uniform();
    double nu_t = 8.0 * rng.uniform();
    double closed = failure_probability(p, nu_t, 1.0);
    double series = oracle::lifetime_failure_series(p, nu_t);
    CHECK(std::abs(closed - series) <= 1e-12);
  }

  CHECK(failure_probability(0.2, 0.1, 50.0) < failure_probability(0.3, 0.1, 50.0));
  CHECK(failure_probability(0.2, 0.1, 50.0) < failure_probability(0.2, 0.2, 50.0));
}

TEST_CASE("reliability index") {
  CHECK(reliability_index(0.5) == 0.0);
  CHECK(reliability_index(norm_cdf(-3.0)) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(reliability_index(0.085) ==
        doctest::Approx(1.3722038089987258).epsilon(1e-12));
  // Index and tail probability invert each other through the normal law.
  for (double p : {1e-6, 1e-3, 0.02, 0.3, 0.7, 0.99}) {
    CHECK(norm_cdf(-reliability_index(p)) == doctest::Approx(p).epsilon(1e-9));
  }
  // Degenerate probabilities clamp instead of diverging.
  CHECK(reliability_index(0.0) == reliability_index(1e-15));
  CHECK(reliability_index(1.0) == reliability_index(1.0 - 1e-15));
  CHECK(std::isfinite(reliability_index(0.0)));
  CHECK(std::isfinite(reliability_index(1.0)));
  CHECK(reliability_index(0.0) > 7.0);
}

TEST_CASE("noisy objective wiring") {
  ExcitationSpec exc;
  ReliabilitySpec rel;
  rel.barrier = barrier_height(Barrier::kH400);

  Eigen::VectorXd x = mean_variates();
  Eigen::VectorXd d(2);
  d << 2.963e6, 0.152e6;
  double beta = -tmd_phi(d, x, exc, rel);
  CHECK(beta > 1.0);
  CHECK(beta < 8.0);

  // A 31st variate overrides the damper mass; a far heavier damper changes
  // the answer.
  Eigen::VectorXd x31(31);
  x31.head(30) = x;
  x31[30] = 108.0e3;
  CHECK(tmd_phi(d, x31, exc, rel) == doctest::Approx(tmd_phi(d, x, exc, rel)).epsilon(1e-12));
  x31[30] = 300.0e3;
  CHECK(tmd_phi(d, x31, exc, rel) != doctest::Approx(tmd_phi(d, x, exc, rel)).epsilon(1e-6));

  CHECK_THROWS(tmd_phi(Eigen::VectorXd::Zero(3), x, exc, rel));
  CHECK_THROWS(tmd_phi(d, Eigen::VectorXd::Ones(29), exc, rel));

  // The zero design clips to a sliver of damper stiffness and still resolves.
  CHECK(std::isfinite(tmd_phi(Eigen::VectorXd::Zero(2), x, exc, rel)));
}

TEST_CASE("barrier parsing and heights") {
  CHECK(parse_barrier("h300") == Barrier::kH300);
  CHECK(parse_barrier("h400") == Barrier::kH400);
  CHECK(parse_barrier("h500") == Barrier::kH500);
  CHECK_THROWS(parse_barrier("h600"));
  CHECK(barrier_height(Barrier::kH300) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(barrier_height(Barrier::kH400) == doctest::Approx(0.075).epsilon(1e-14));
  CHECK(barrier_height(Barrier::kH500) == doctest::Approx(0.06).epsilon(1e-14));
}

TEST_CASE("mean-parameter reliability falls as the drift limit tightens") {
  ExcitationSpec exc;
  Eigen::VectorXd x = mean_variates();

  auto beta_at = [&](Barrier b, double kd, double cd) {
    ReliabilitySpec rel;
    rel.barrier = barrier_height(b);
    Eigen::VectorXd d(2);
    d << kd, cd;
    return -tmd_phi(d, x, exc, rel);
  };
  double b300 = beta_at(Barrier::kH300, 3.053e6, 0.153e6);
  double b400 = beta_at(Barrier::kH400, 2.963e6, 0.152e6);
  double b500 = beta_at(Barrier::kH500, 3.018e6, 0.160e6);
  CHECK(b300 > b400);
  CHECK(b400 > b500);
}

TEST_CASE("registry problem layout") {
  StochasticProblem p = make_tmd_problem(Barrier::kH400);
  CHECK(p.dim() == 2);
  CHECK(p.n_x() == 30);
  REQUIRE(static_cast<int>(p.random().size()) == 31);
  CHECK(p.space().lower[0] == 0.0);
  CHECK(p.space().lower[1] == 0.0);
  CHECK(p.space().upper[0] == doctest::Approx(4.0e6));
  CHECK(p.space().upper[1] == doctest::Approx(1.0e6));

  auto expect_gamma = [&](int idx, double mean, double cov) {
    CHECK(p.random()[idx].family == Marginal::kGamma);
    CHECK(p.random()[idx].mean == doctest::Approx(mean));
    CHECK(p.random()[idx].dispersion == doctest::Approx(cov));
  };
  expect_gamma(0, 650.0e6, 0.15);
  expect_gamma(10, 360.0e3, 0.05);
  expect_gamma(20, 6.20e6, 0.25);
  expect_gamma(30, 108.0e3, 0.05);

  StochasticProblem fixed = make_tmd_problem(Barrier::kH400, false);
  CHECK(static_cast<int>(fixed.random().size()) == 30);
  CHECK(fixed.n_x() == 30);

  // One noisy draw through the full pipeline stays finite.
  RngStream rng(11);
  Eigen::VectorXd xs = draw(p.random(), rng);
  REQUIRE(xs.size() == 31);
  Eigen::VectorXd d(2);
  d << 2.0e6, 0.2e6;
  CHECK(std::isfinite(p.eval_phi(d, xs)));
}
