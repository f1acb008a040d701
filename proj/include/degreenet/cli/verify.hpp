#pragma once

#include <string>
#include <vector>

#include "degreenet/cli/config.hpp"

namespace degreenet::cli {

struct Check {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::string suite;
  std::vector<Check> checks;
  bool all_pass() const;
  io::Json json() const;
};

/// Suites: specfun, oracle, moments, clt.
VerifyReport run_suite(const std::string& suite, const RunConfig& cfg);

std::vector<std::string> suite_names();

}  // namespace degreenet::cli
