#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pingff/gaussfield.hpp"
#include "pingff/walk.hpp"

using namespace pingff;
using lattice::BoxSpec;

TEST_CASE("return probabilities, exact values") {
  CHECK(walk::return_probability(2, 0) == 1.0);
  CHECK(walk::return_probability(2, 2) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(walk::return_probability(2, 4) ==
        doctest::Approx(9.0 / 64.0).epsilon(1e-12));
  CHECK(walk::return_probability(3, 2) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK_THROWS_AS(walk::return_probability(2, 3), std::invalid_argument);
  CHECK_THROWS_AS(walk::return_probability(1, 2), std::invalid_argument);
}

TEST_CASE("d=3 return probability equals direct path count at 4 steps") {
  // 4-step returns on Z^3: 90 closed paths out of 6^4
  CHECK(walk::return_probability(3, 4) ==
        doctest::Approx(90.0 / 1296.0).epsilon(1e-12));
}

TEST_CASE("stirling ratio increases toward 1") {
  CHECK(walk::stirling_check(1) == doctest::Approx(M_PI / 4.0).epsilon(1e-14));
  double prev = 0.0;
  for (long long ell : {1LL, 10LL, 100LL, 1000LL}) {
    const double r = walk::stirling_check(ell);
    CHECK(r > prev);
    CHECK(r < 1.0);
    prev = r;
  }
  CHECK(std::fabs(walk::stirling_check(100) - 1.0) < 5e-3);
  CHECK(std::fabs(walk::stirling_check(10000) - 1.0) < 1e-4);
}

TEST_CASE("restricted Green function, small boxes") {
  // single site: the first move always exits
  walk::WalkKernel k1{2, 1.0, BoxSpec(2, 1)};
  CHECK(walk::green_restricted(k1, 0, 0) == doctest::Approx(1.0).epsilon(1e-14));

  // 2x2 diagonal equals the field variance 7/6
  walk::WalkKernel k2{2, 1.0, BoxSpec(2, 2)};
  for (int x = 0; x < 4; ++x)
    CHECK(walk::green_restricted(k2, x, x) ==
          doctest::Approx(7.0 / 6.0).epsilon(1e-12));

  // near-total killing: the diagonal tends to rho, not 1
  walk::WalkKernel k3{2, 1e-6, BoxSpec(2, 2)};
  CHECK(walk::green_restricted(k3, 0, 0) == doctest::Approx(1e-6).epsilon(1e-5));
  CHECK(walk::green_restricted(k3, 0, 1) < 1e-11);
}

TEST_CASE("walk/matrix duality on mixed boxes") {
  for (int d : {2, 3}) {
    for (double m : {0.0, 0.1, 0.5}) {
      BoxSpec box(d, 4);
      auto model = gauss::build_model(box, m, 0.0, 0.0);
      walk::WalkKernel kernel{d, walk::survival_from_mass(m), box};
      Eigen::VectorXd e = Eigen::VectorXd::Zero(box.site_count());
      for (lattice::SiteIndex x = 0; x < box.site_count(); x += 3) {
        e[x] = 1.0;
        Eigen::VectorXd col = model.factor->solve(e);
        e[x] = 0.0;
        auto row = walk::green_row(kernel, x);
        for (lattice::SiteIndex y = 0; y < box.site_count(); ++y)
          CHECK(std::fabs(row[y] - col[y]) < 1e-10);
      }
    }
  }
}

TEST_CASE("DP conserves probability") {
  walk::WalkKernel kernel{2, 0.9, BoxSpec(2, 4)};
  walk::WalkDP dp(kernel, 5);
  for (int step = 0; step < 100; ++step) {
    dp.step();
    CHECK(std::fabs(dp.in_box_total() + dp.exited + dp.killed - 1.0) < 1e-14);
  }
}

TEST_CASE("unbounded massless d=2 Green function rejected") {
  walk::WalkKernel free2{2, 1.0, std::nullopt};
  CHECK_THROWS_AS(walk::green_row(free2, 0), std::domain_error);
}

TEST_CASE("infinite-volume Green values") {
  const double g3 = walk::green_infinite(3);
  CHECK(g3 == doctest::Approx(1.516386059).epsilon(1e-6));
  const double g4 = walk::green_infinite(4);
  CHECK(g4 > 1.0);
  CHECK(g4 < 1.5);
  CHECK(g4 < g3);
  CHECK_THROWS_AS(walk::green_infinite(2), std::domain_error);
}

TEST_CASE("massive variance bound") {
  const auto mv = walk::massive_variance_bound(0.1, 64);
  CHECK(mv.bound_ratio > 0.0);
  CHECK(mv.bound_ratio < 3.0);

  // monotone in the killing
  const auto strong = walk::massive_variance_bound(0.3, 32);
  const auto weak = walk::massive_variance_bound(0.1, 32);
  CHECK(strong.variance < weak.variance);

  // the center dominates off-center sites
  BoxSpec box(2, 8);
  walk::WalkKernel kernel{2, walk::survival_from_mass(0.2), box};
  auto row = walk::green_row(kernel, box.index({4, 4}));
  const double center = row[box.index({4, 4})];
  walk::WalkKernel k2 = kernel;
  for (lattice::SiteIndex x = 0; x < box.site_count(); ++x) {
    auto other = walk::green_row(k2, x);
    CHECK(other[x] <= center + 1e-12);
  }
  CHECK_THROWS_AS(walk::massive_variance_bound(0.7, 16), std::invalid_argument);
}

TEST_CASE("partition-ratio series matches the log-determinant") {
  for (double m : {0.3, 0.2, 0.1}) {
    for (int n : {4, 8}) {
      const double series = walk::ratio_Z_series(m, n);
      auto model = gauss::build_model(BoxSpec(2, n), m, 0.0, 0.0);
      const double exact = -gauss::log_partition(model) / (n * n);
      CHECK(std::fabs(series - exact) < 1e-8);
    }
  }
}

TEST_CASE("partition-ratio series vanishes with the mass") {
  CHECK(walk::ratio_Z_series(0.001, 8) < 1e-4);
  // and stays below a fitted multiple of m^2 |log m|
  for (double m : {0.3, 0.1, 0.03, 0.01}) {
    CHECK(walk::ratio_Z_series(m, 8) <
          3.0 * m * m * std::fabs(std::log(m)));
  }
}
