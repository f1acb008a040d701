#pragma once

#include <string>
#include <vector>

#include "degreenet/cli/config.hpp"

namespace degreenet::cli {

/// Files written by a command, relative to output_dir, in write order.
struct RunOutput {
  std::vector<std::string> files;
  io::Json summary;
};

RunOutput cmd_exact_pmf(const RunConfig& cfg);
RunOutput cmd_simulate(const RunConfig& cfg);
RunOutput cmd_figure(const RunConfig& cfg);
RunOutput cmd_estimate(const RunConfig& cfg);

/// Dispatch on cfg.command (verify excluded).
RunOutput run(const RunConfig& cfg);

/// Figure-3 default densities: strictly positive polynomials on [0,1].
std::vector<SmoothDensityModel> figure3_densities();

}  // namespace degreenet::cli
