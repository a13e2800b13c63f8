#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "segopt/rng.hpp"
#include "segopt/sampling.hpp"

using namespace segopt;

TEST_CASE("child streams depend only on seed and salt") {
  RngStream a(42);
  RngStream b(42);
  CHECK(a.child(7).next_u64() == b.child(7).next_u64());

  // Consuming variates from the parent must not shift child derivation.
  RngStream c(42);
  (void)c.next_u64();
  (void)c.next_u64();
  RngStream d(42);
  CHECK(c.child(3).next_u64() == d.child(3).next_u64());

  CHECK(d.child(1).next_u64() != d.child(2).next_u64());
  CHECK(RngStream(1).next_u64() != RngStream(2).next_u64());
}

TEST_CASE("uniform transforms respect their ranges") {
  RngStream rng(1);
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = rng.uniform_open();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
  for (int i = 0; i < 1000; ++i) {
    const double w = rng.uniform(-2.0, 3.0);
    CHECK(w >= -2.0);
    CHECK(w < 3.0);
  }
}

TEST_CASE("next_below covers small ranges") {
  RngStream rng(3);
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 5000; ++i) {
    const std::uint64_t v = rng.next_below(5);
    REQUIRE(v < 5);
    ++hits[static_cast<int>(v)];
  }
  for (int h : hits) CHECK(h > 800);
  CHECK(rng.next_below(1) == 0);
}

TEST_CASE("normal moments match over one million draws") {
  RngStream rng(11);
  const int n = 1000000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = rng.normal(1.0, 0.1);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double sd = std::sqrt((sum_sq - n * mean * mean) / (n - 1));
  CHECK(std::abs(mean - 1.0) <= 3.0 * 0.1 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(sd - 0.1) <= 0.001);  // within 1%
}

TEST_CASE("gamma draws are moment matched from mean and cov") {
  // Table values for story stiffness: mean 650e6, cov 15%.
  RandomSpec spec{{Marginal::kGamma, 650e6, 0.15}};
  RngStream rng(21);
  const int n = 1000000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = draw(spec, rng)[0];
    CHECK(v > 0.0);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double sd = std::sqrt((sum_sq - n * mean * mean) / (n - 1));
  CHECK(std::abs(mean / 650e6 - 1.0) <= 0.01);
  CHECK(std::abs(sd / (0.15 * 650e6) - 1.0) <= 0.01);
}

TEST_CASE("zero dispersion normal is exact") {
  RandomSpec spec{{Marginal::kNormal, 1.0, 0.0}};
  RngStream rng(5);
  for (int i = 0; i < 10; ++i) CHECK(draw(spec, rng)[0] == 1.0);
}

TEST_CASE("draw emits one variate per marginal") {
  RandomSpec spec{{Marginal::kNormal, 1.0, 0.1},
                  {Marginal::kGamma, 2.0, 0.25},
                  {Marginal::kNormal, -3.0, 0.5}};
  RngStream rng(8);
  const Eigen::VectorXd x = draw(spec, rng);
  REQUIRE(x.size() == 3);
  CHECK(x[1] > 0.0);
}

TEST_CASE("invalid marginals are rejected") {
  CHECK_THROWS(validate(RandomSpec{{Marginal::kNormal, 0.0, -0.1}}));
  CHECK_THROWS(validate(RandomSpec{{Marginal::kGamma, -1.0, 0.1}}));
  CHECK_THROWS(validate(RandomSpec{{Marginal::kGamma, 1.0, 0.0}}));
  CHECK_NOTHROW(validate(RandomSpec{{Marginal::kNormal, 0.0, 0.0}}));
}

namespace {

void check_stratification(const Eigen::MatrixXd& plan) {
  const int n_points = static_cast<int>(plan.rows());
  for (int j = 0; j < plan.cols(); ++j) {
    std::vector<int> bins(n_points, 0);
    for (int i = 0; i < n_points; ++i) {
      const double u = plan(i, j);
      REQUIRE(u > 0.0);
      REQUIRE(u < 1.0);
      int b = static_cast<int>(u * n_points);
      if (b == n_points) b = n_points - 1;
      ++bins[b];
    }
    for (int b : bins) CHECK(b == 1);
  }
}

}  // namespace

TEST_CASE("lhs stratification is exact in every dimension") {
  RngStream rng(9);
  check_stratification(lhs_plan(5, 1, rng));
  check_stratification(lhs_plan(14, 2, rng));
  check_stratification(lhs_plan(1, 3, rng));
  check_stratification(lhs_plan(70, 10, rng));
}

TEST_CASE("same seed reproduces the plan bit for bit") {
  RngStream a(123);
  RngStream b(123);
  const Eigen::MatrixXd pa = lhs_plan(8, 3, a);
  const Eigen::MatrixXd pb = lhs_plan(8, 3, b);
  REQUIRE(pa.rows() == pb.rows());
  for (int i = 0; i < pa.rows(); ++i)
    for (int j = 0; j < pa.cols(); ++j) CHECK(pa(i, j) == pb(i, j));
}

TEST_CASE("design space normalization is a clean affine bijection") {
  DesignSpace space{Eigen::Vector2d(-5.0, 0.0), Eigen::Vector2d(10.0, 15.0)};
  CHECK(space.normalize(Eigen::Vector2d(-5.0, 0.0)).isApprox(Eigen::Vector2d(0.0, 0.0)));
  CHECK(space.normalize(Eigen::Vector2d(10.0, 15.0)).isApprox(Eigen::Vector2d(1.0, 1.0)));
  CHECK(space.normalize(Eigen::Vector2d(2.5, 7.5)).isApprox(Eigen::Vector2d(0.5, 0.5)));
  const Eigen::Vector2d d(3.25, 11.0);
  CHECK((space.denormalize(space.normalize(d)) - d).lpNorm<Eigen::Infinity>() <= 1e-12);
  CHECK_THROWS(space.normalize(Eigen::Vector2d(-5.1, 0.0)));
  CHECK_THROWS(space.denormalize(Eigen::Vector2d(1.1, 0.0)));
  CHECK_THROWS(DesignSpace(Eigen::Vector2d(0.0, 1.0), Eigen::Vector2d(1.0, 1.0)));
}
