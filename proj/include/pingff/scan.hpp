#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pingff/pinning.hpp"

namespace pingff::scan {

struct ScanConfig {
  int d = 2;
  int n = 8;
  double a = 1.0;
  std::vector<double> b_grid;
  std::vector<double> h_grid;
  int n_envs = 5;            // environments per grid point
  long long n_samples = 10000;
  std::string estimator = "auto";  // auto | is | ti
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out;           // empty = stdout
  int ti_sweeps = 2000;
  int ti_burn_in = 200;
  int ti_nodes = 8;
};

nlohmann::json config_to_json(const ScanConfig& cfg);
ScanConfig config_from_json(const nlohmann::json& j);

struct ScanResult {
  std::string header;  // '#'-prefixed effective-config echo
  std::string body;    // CSV rows; byte-identical for equal (config, seed)
};

// One row per (b,h): disorder-averaged quenched, annealed, annealed
// strength, bound predicates. Deterministic given the seed; independent
// of the worker count.
ScanResult run_scan(const ScanConfig& cfg);

}  // namespace pingff::scan
