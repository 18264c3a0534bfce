#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <asttf/metrics.hpp>
#include <asttf/signal.hpp>

#include <cmath>
#include <random>

using namespace asttf;

TEST_CASE("uniform mass over M cells has entropy log2 M") {
  for (int m : {2, 4, 16, 64}) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Constant(1, m, 0.25);
    CHECK(renyi_entropy(c) == doctest::Approx(std::log2(m)).epsilon(1e-12));
  }
}

TEST_CASE("a single occupied cell has zero entropy") {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(8, 8);
  c(3, 5) = 7.0;
  CHECK(renyi_entropy(c) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("two equal cells carry one bit") {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 2);
  c(0, 0) = 3.0;
  c(1, 1) = 3.0;
  CHECK(renyi_entropy(c) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("entropy is invariant under positive scaling") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd c(6, 9);
  for (int i = 0; i < c.size(); ++i) c(i) = unif(rng);
  const double base = renyi_entropy(c);
  for (double beta : {1e-6, 0.5, 3.0, 1e8})
    CHECK(renyi_entropy(beta * c) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("splitting one cell into two empties never decreases entropy") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 8);
    for (int i = 0; i < 8; ++i) c(i % 2, i) = unif(rng);
    const double before = renyi_entropy(c);
    Eigen::MatrixXd split = c;
    split(0, 0) = 0.5 * c(0, 0);
    split(3, 7) = 0.5 * c(0, 0);  // previously empty cell
    CHECK(renyi_entropy(split) >= before - 1e-12);
  }
}

TEST_CASE("entropy of other orders follows the closed form") {
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(1, 8, 1.0);
  CHECK(renyi_entropy(c, 2.0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(renyi_entropy(c, 0.5) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("degenerate distributions are rejected") {
  CHECK_THROWS_AS(renyi_entropy(Eigen::MatrixXd::Zero(3, 3)), std::domain_error);
  Eigen::MatrixXd neg = Eigen::MatrixXd::Constant(2, 2, 1.0);
  neg(0, 0) = -0.5;
  CHECK_THROWS_AS(renyi_entropy(neg), std::invalid_argument);
  CHECK_THROWS_AS(renyi_entropy(Eigen::MatrixXd::Ones(2, 2), 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(renyi_entropy(Eigen::MatrixXd::Ones(2, 2), -1.0),
                  std::invalid_argument);
}

TEST_CASE("rmse of identical signals is zero") {
  Signal s{Eigen::VectorXd::Random(64), 1.0};
  CHECK(rmse(s, s) == 0.0);
}

TEST_CASE("rmse of a constant offset is the offset") {
  Signal a{Eigen::VectorXd::Zero(50), 1.0};
  Signal b{Eigen::VectorXd::Constant(50, 0.75), 1.0};
  CHECK(rmse(a, b) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("rmse against additive noise estimates sigma") {
  const int n = 100000;
  Signal truth{Eigen::VectorXd::Zero(n), 1.0};
  Signal noisy = add_noise(truth, 0.37, 2);
  CHECK(rmse(noisy, truth) == doctest::Approx(0.37).epsilon(0.02));
}

TEST_CASE("rmse is a metric") {
  std::mt19937 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd x(32), y(32), z(32);
    for (int i = 0; i < 32; ++i) {
      x[i] = gauss(rng);
      y[i] = gauss(rng);
      z[i] = gauss(rng);
    }
    Signal sx{x, 1.0}, sy{y, 1.0}, sz{z, 1.0};
    CHECK(rmse(sx, sy) == rmse(sy, sx));
    CHECK(rmse(sx, sy) >= 0.0);
    CHECK(rmse(sx, sz) <= rmse(sx, sy) + rmse(sy, sz) + 1e-12);
  }
  Signal a{Eigen::VectorXd::Ones(4), 1.0};
  CHECK(rmse(a, a) == 0.0);
}

TEST_CASE("rmse rejects mismatched lengths") {
  Signal a{Eigen::VectorXd::Zero(4), 1.0};
  Signal b{Eigen::VectorXd::Zero(5), 1.0};
  CHECK_THROWS_AS(rmse(a, b), std::invalid_argument);
}
