#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pingff::verify {

// one measured quantity with its admissible band
struct Check {
  std::string name;
  double measured = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  bool pass() const { return measured >= lo && measured <= hi; }
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;

  bool pass() const;
};

std::vector<std::string> suite_names();

// suite ∈ {walk-matrix, lemma-massive, stirling, oracle, jensen, rescale}
SuiteReport run_suite(const std::string& name, std::uint64_t seed);

// one "PASS|FAIL suite.check measured= band=[lo,hi]" line per check
void print_report(const SuiteReport& report, std::ostream& out);

}  // namespace pingff::verify
