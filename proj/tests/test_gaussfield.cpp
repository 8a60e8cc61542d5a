#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pingff/gaussfield.hpp"
#include "pingff/normal.hpp"
#include "pingff/walk.hpp"

using namespace pingff;
using lattice::BoxSpec;

TEST_CASE("single-site and 2x2 marginals") {
  auto m1 = gauss::build_model(BoxSpec(2, 1), 0.0, 0.0, 0.0);
  auto s1 = gauss::marginal_summary(m1);
  CHECK(s1.mean[0] == doctest::Approx(0.0));
  CHECK(s1.variance[0] == doctest::Approx(1.0));

  auto m2 = gauss::build_model(BoxSpec(2, 2), 0.0, 0.0, 0.0);
  auto s2 = gauss::marginal_summary(m2);
  for (int x = 0; x < 4; ++x)
    CHECK(s2.variance[x] == doctest::Approx(7.0 / 6.0).epsilon(1e-12));

  auto m3 = gauss::build_model(BoxSpec(2, 1), 1.0, 0.0, 0.0);
  CHECK(gauss::marginal_summary(m3).variance[0] ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("precision symmetry and negative mass rejected") {
  auto model = gauss::build_model(BoxSpec(3, 3), 0.2, 0.0, 0.0);
  gauss::SpMat diff = gauss::SpMat(model.precision.transpose()) - model.precision;
  CHECK(diff.coeffs().cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(gauss::build_model(BoxSpec(2, 2), -0.1, 0.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("constant boundary gives constant mean") {
  const double a = 0.8;
  auto model = gauss::build_model(BoxSpec(2, 4), 0.0, a, 0.0);
  for (int x = 0; x < 16; ++x)
    CHECK(model.mean[x] == doctest::Approx(a).epsilon(1e-12));
}

TEST_CASE("d=2 center variance grows with n") {
  double prev = 0.0;
  for (int n : {4, 8, 16, 32}) {
    BoxSpec box(2, n);
    auto model = gauss::build_model(box, 0.0, 0.0, 0.0);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(box.site_count());
    const auto center = box.index({n / 2, n / 2});
    e[center] = 1.0;
    const double var = model.factor->solve(e)[center];
    CHECK(var > prev);
    prev = var;
  }
}

TEST_CASE("massive mean relaxes to the center away from the boundary") {
  const double zeta = 1.0;
  BoxSpec box(2, 9);
  auto model = gauss::build_model(box, 0.5, 0.0, zeta);
  // worst deviation per boundary-distance shell shrinks with the distance
  std::vector<double> worst(6, 0.0);
  for (lattice::SiteIndex x = 0; x < box.site_count(); ++x) {
    const int dist = box.dist_to_boundary(x);
    worst[dist] = std::max(worst[dist], std::fabs(model.mean[x] - zeta));
  }
  for (int dist = 2; dist <= 5; ++dist) CHECK(worst[dist] < worst[dist - 1]);
}

TEST_CASE("exact sampling matches the covariance") {
  // scalar variance
  auto m1 = gauss::build_model(BoxSpec(2, 1), 0.0, 0.0, 0.0);
  CounterRng rng(2024);
  const int N = 100000;
  double ss = 0.0;
  for (int i = 0; i < N; ++i) {
    const double v = gauss::sample_exact(m1, rng)[0];
    ss += v * v;
  }
  CHECK(std::fabs(ss / N - 1.0) < 4.0 * std::sqrt(2.0 / N));

  // empirical covariance entries on a 4x4 box within 5 se of Q^{-1}
  BoxSpec box(2, 4);
  auto model = gauss::build_model(box, 0.0, 0.0, 0.0);
  const auto count = box.site_count();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(count, count);
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(count, count);
  for (int c = 0; c < count; ++c) cov.col(c) = model.factor->solve(id.col(c));

  Eigen::MatrixXd emp = Eigen::MatrixXd::Zero(count, count);
  CounterRng rng2(77);
  for (int i = 0; i < N; ++i) {
    auto phi = gauss::sample_exact(model, rng2);
    emp += phi * phi.transpose();
  }
  emp /= N;
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      const double se = std::sqrt(
          (cov(i, i) * cov(j, j) + cov(i, j) * cov(i, j)) / N);
      CHECK(std::fabs(emp(i, j) - cov(i, j)) < 5.0 * se);
    }
  }
}

TEST_CASE("boundary-condition sampling mean") {
  const double a = 1.3;
  auto model = gauss::build_model(BoxSpec(2, 3), 0.0, a, 0.0);
  CounterRng rng(5);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(9);
  const int N = 20000;
  for (int i = 0; i < N; ++i) sum += gauss::sample_exact(model, rng);
  for (int x = 0; x < 9; ++x)
    CHECK(std::fabs(sum[x] / N - a) < 5.0 * std::sqrt(7.0 / 6.0 / N) + 0.02);
}

TEST_CASE("window probability values and monotonicity") {
  CHECK(gauss::window_probability(1.0, 1.0, 1.0, 0.0) ==
        doctest::Approx(0.4772499).epsilon(1e-6));
  // continuity at s=0
  CHECK(std::fabs(gauss::window_probability(1.0, 1.0, 1.0, 1e-12) -
                  gauss::window_probability(1.0, 1.0, 1.0, 0.0)) < 1e-9);
  // non-increasing in s for mean = a
  double prev = gauss::window_probability(1.0, 2.0, 1.0, 0.0);
  for (int i = 1; i <= 40; ++i) {
    const double cur = gauss::window_probability(1.0, 2.0, 1.0, 0.05 * i);
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }
  CHECK_THROWS_AS(gauss::window_probability(0.0, -1.0, 1.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("overlap derivative certifies the slope") {
  const auto slope = gauss::overlap_derivative(1.0, 1.0);
  CHECK(slope.c1 == doctest::Approx(0.34495).epsilon(2e-3));
  CHECK(slope.s_max == doctest::Approx(0.25));
  // the certificate itself: P(s=0) - P(s) >= c1 * s on (0, s_max]
  for (int i = 1; i <= 100; ++i) {
    const double s = slope.s_max * i / 100.0;
    const double drop = gauss::window_probability(1.0, 1.0, 1.0, 0.0) -
                        gauss::window_probability(1.0, 1.0, 1.0, s);
    CHECK(drop >= slope.c1 * s - 1e-12);
  }
  // wide well: the slope approaches the central density
  const auto wide = gauss::overlap_derivative(1.0, 10.0, 0.01);
  CHECK(wide.c1 == doctest::Approx(normal_pdf(0.0)).epsilon(1e-2));
}

TEST_CASE("overlap slope against finite differences at large variance") {
  // d=2 regime: variance of order |log m|
  for (double variance : {2.0, 4.6, 9.2}) {
    const auto slope = gauss::overlap_derivative(variance, 1.0);
    const double s = 1e-4;
    const double fd = (gauss::window_probability(1.0, variance, 1.0, 0.0) -
                       gauss::window_probability(1.0, variance, 1.0, s)) / s;
    CHECK(slope.c1 <= fd * (1.0 + 1e-6));
    CHECK(slope.c1 > 0.5 * fd);
  }
}

TEST_CASE("log partition identities") {
  auto zero = gauss::build_model(BoxSpec(2, 4), 0.0, 0.0, 0.0);
  CHECK(gauss::log_partition(zero) == doctest::Approx(0.0));

  // shift invariance: constant boundary costs nothing at m=0
  auto shifted = gauss::build_model(BoxSpec(2, 4), 0.0, 1.7, 0.0);
  CHECK(std::fabs(gauss::log_partition(shifted)) < 1e-10);

  // massive suppression in the Lemma band
  const int n = 16;
  const double m = 0.1;
  auto massive = gauss::build_model(BoxSpec(2, n), m, 0.0, 0.0);
  const double lz = gauss::log_partition(massive);
  CHECK(lz < 0.0);
  CHECK(lz >= -3.0 * n * n * m * m * std::fabs(std::log(m)));
}

TEST_CASE("d=3 variances bounded by the infinite-volume Green value") {
  const double g3 = walk::green_infinite(3);
  for (int n : {4, 6, 8}) {
    BoxSpec box(3, n);
    auto model = gauss::build_model(box, 0.0, 0.0, 0.0);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(box.site_count());
    for (lattice::SiteIndex x = 0; x < box.site_count(); ++x) {
      e[x] = 1.0;
      CHECK(model.factor->solve(e)[x] <= g3);
      e[x] = 0.0;
    }
  }
}
