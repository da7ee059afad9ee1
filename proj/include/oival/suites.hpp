#pragma once

#include <string>
#include <vector>

#include "oival/seq.hpp"

namespace oival {

// Knobs shared by every suite.  Zero horizon or rounds picks the suite's own
// default; empty fixtures falls back to $OIVAL_FIXTURES, then ./fixtures.
struct RunConfig {
  u64 seed = 1;
  u64 horizon = 0;
  u64 rounds = 0;
  std::string fixtures;
};

struct SuiteResult {
  std::string name;
  u64 checks = 0;
  std::vector<std::string> failures;  // counterexample inputs as seq-specs
  bool passed() const { return failures.empty(); }
};

const std::vector<std::string>& suite_names();

// Runs one named suite.  Unknown names raise unknown_suite; fixture problems
// surface as parse errors.  "selectors" bundles the six fixture-driven suites.
SuiteResult run_suite(const std::string& name, const RunConfig& cfg);

std::string fixtures_dir(const RunConfig& cfg);

}  // namespace oival
