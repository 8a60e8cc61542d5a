#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "pingff/lattice.hpp"

using namespace pingff;
using lattice::BoxSpec;

TEST_CASE("edge counts on small boxes") {
  auto e21 = lattice::enumerate_edges(BoxSpec(2, 1));
  CHECK(e21.interior.size() == 0);
  CHECK(e21.boundary.size() == 4);

  auto e22 = lattice::enumerate_edges(BoxSpec(2, 2));
  CHECK(e22.interior.size() == 4);
  CHECK(e22.boundary.size() == 8);
  CHECK(e22.total() == 12);

  auto e31 = lattice::enumerate_edges(BoxSpec(3, 1));
  CHECK(e31.interior.size() == 0);
  CHECK(e31.boundary.size() == 6);
}

TEST_CASE("edge count formula vs enumeration") {
  for (int d : {2, 3}) {
    for (int n = 1; n <= 6; ++n) {
      BoxSpec box(d, n);
      auto edges = lattice::enumerate_edges(box);
      const auto faces = static_cast<std::size_t>(std::pow(n, d - 1));
      CHECK(edges.interior.size() == d * faces * (n - 1));
      CHECK(edges.boundary.size() == 2 * d * faces);
    }
  }
}

TEST_CASE("every site has exactly 2d incident edges") {
  BoxSpec box(3, 3);
  std::map<lattice::SiteIndex, int> incident;
  auto edges = lattice::enumerate_edges(box);
  for (const auto& [x, y] : edges.interior) {
    ++incident[x];
    ++incident[y];
  }
  for (const auto& [x, outer] : edges.boundary) ++incident[x];
  for (lattice::SiteIndex x = 0; x < box.site_count(); ++x)
    CHECK(incident[x] == 2 * box.d);
}

TEST_CASE("row-major indexing round-trips") {
  for (int d : {2, 3}) {
    BoxSpec box(d, 4);
    for (lattice::SiteIndex x = 0; x < box.site_count(); ++x)
      CHECK(box.index(box.coords(x)) == x);
  }
}

TEST_CASE("inner boundary sizes") {
  CHECK(lattice::inner_boundary(BoxSpec(2, 2)).size() == 4);
  CHECK(lattice::inner_boundary(BoxSpec(2, 4)).size() == 12);
  CHECK(lattice::inner_boundary(BoxSpec(3, 3)).size() == 26);
}

TEST_CASE("environment determinism and values") {
  BoxSpec box(2, 8);
  auto e1 = lattice::sample_environment(box, 1.5, -0.2, 42);
  auto e2 = lattice::sample_environment(box, 1.5, -0.2, 42);
  CHECK(e1.signs == e2.signs);

  bool seen_minus = false, seen_plus = false;
  for (lattice::SiteIndex x = 0; x < box.site_count(); ++x) {
    CHECK((e1.signs[x] == 1 || e1.signs[x] == -1));
    const double v = e1.potential(x);
    CHECK((v == doctest::Approx(1.3) || v == doctest::Approx(-1.7)));
    (e1.signs[x] == 1 ? seen_plus : seen_minus) = true;
  }
  CHECK(seen_plus);
  CHECK(seen_minus);

  auto flat = lattice::sample_environment(box, 0.0, 0.7, 9);
  for (double v : flat.potentials()) CHECK(v == doctest::Approx(0.7));
}

TEST_CASE("environment sign histogram") {
  BoxSpec box(2, 100);  // 10^4 sites
  auto env = lattice::sample_environment(box, 1.0, 0.0, 123);
  double mean = 0.0;
  for (auto s : env.signs) mean += s;
  mean /= static_cast<double>(env.signs.size());
  CHECK(std::fabs(mean) < 4.0 / std::sqrt(1e4));
}

TEST_CASE("homogeneous environment") {
  auto env = lattice::homogeneous_environment(BoxSpec(2, 3), 0.25);
  for (lattice::SiteIndex x = 0; x < 9; ++x)
    CHECK(env.potential(x) == doctest::Approx(0.25));
}

TEST_CASE("invalid boxes rejected") {
  CHECK_THROWS_AS(BoxSpec(1, 4), std::invalid_argument);
  CHECK_THROWS_AS(BoxSpec(2, -1), std::invalid_argument);
}
