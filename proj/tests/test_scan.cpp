#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pingff/scan.hpp"

using namespace pingff;

namespace {

scan::ScanConfig small_config() {
  scan::ScanConfig cfg;
  cfg.d = 2;
  cfg.n = 3;
  cfg.a = 1.0;
  cfg.b_grid = {0.0, 0.5};
  cfg.h_grid = {-0.1, 0.1};
  cfg.n_envs = 2;
  cfg.n_samples = 500;
  cfg.seed = 31;
  cfg.ti_sweeps = 400;
  cfg.ti_burn_in = 50;
  cfg.ti_nodes = 6;
  return cfg;
}

}  // namespace

TEST_CASE("config round-trips through JSON") {
  auto cfg = small_config();
  cfg.estimator = "ti";
  cfg.workers = 3;
  cfg.out = "somewhere.csv";
  auto back = scan::config_from_json(scan::config_to_json(cfg));
  CHECK(back.d == cfg.d);
  CHECK(back.n == cfg.n);
  CHECK(back.a == cfg.a);
  CHECK(back.b_grid == cfg.b_grid);
  CHECK(back.h_grid == cfg.h_grid);
  CHECK(back.n_envs == cfg.n_envs);
  CHECK(back.n_samples == cfg.n_samples);
  CHECK(back.estimator == cfg.estimator);
  CHECK(back.seed == cfg.seed);
  CHECK(back.workers == cfg.workers);
  CHECK(back.out == cfg.out);
  CHECK(back.ti_sweeps == cfg.ti_sweeps);
  CHECK(back.ti_burn_in == cfg.ti_burn_in);
  CHECK(back.ti_nodes == cfg.ti_nodes);
}

TEST_CASE("invalid configurations rejected") {
  auto cfg = small_config();
  cfg.b_grid.clear();
  CHECK_THROWS_AS(scan::run_scan(cfg), std::invalid_argument);

  cfg = small_config();
  cfg.estimator = "magic";
  CHECK_THROWS_AS(scan::run_scan(cfg), std::invalid_argument);

  cfg = small_config();
  cfg.n_samples = 0;
  CHECK_THROWS_AS(scan::run_scan(cfg), std::invalid_argument);
}

TEST_CASE("body is byte-identical across worker counts") {
  auto cfg = small_config();
  cfg.workers = 1;
  auto one = scan::run_scan(cfg);
  cfg.workers = 3;
  auto three = scan::run_scan(cfg);
  cfg.workers = 7;
  auto seven = scan::run_scan(cfg);
  CHECK(one.body == three.body);
  CHECK(one.body == seven.body);
  CHECK(one.header.rfind("#", 0) == 0);
}

TEST_CASE("b=0 row collapses quenched onto annealed") {
  scan::ScanConfig cfg;
  cfg.d = 2;
  cfg.n = 3;
  cfg.b_grid = {0.0};
  cfg.h_grid = {0.15};
  cfg.n_envs = 2;
  cfg.n_samples = 4000;
  cfg.seed = 5;
  auto result = scan::run_scan(cfg);

  std::istringstream body(result.body);
  std::string header, row;
  std::getline(body, header);
  std::getline(body, row);
  std::vector<std::string> cells;
  std::istringstream cs(row);
  std::string cell;
  while (std::getline(cs, cell, ',')) cells.push_back(cell);
  REQUIRE(cells.size() >= 11);
  const double quenched = std::stod(cells[3]);
  const double annealed = std::stod(cells[6]);
  const double se = std::hypot(std::stod(cells[5]), std::stod(cells[7]));
  CHECK(std::fabs(quenched - annealed) < 5.0 * se + 1e-12);
  CHECK(std::stod(cells[2]) == doctest::Approx(0.15));  // ell = h at b=0
}
