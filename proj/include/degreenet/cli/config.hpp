#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "degreenet/io.hpp"
#include "degreenet/weights.hpp"

namespace degreenet::cli {

enum class Command { exact_pmf, simulate, figure, estimate, verify };
enum class Format { csv, json };

std::string to_string(Command c);

/// Validated run configuration. `raw` keeps the merged JSON (file plus
/// overrides) for the manifest and config hash.
struct RunConfig {
  Command command = Command::exact_pmf;
  std::optional<WeightModel> model;
  std::optional<ScalingMap> scaling;
  std::int64_t n = 0;
  std::uint64_t replicates = 1;
  std::optional<std::uint64_t> master_seed;
  std::filesystem::path output_dir = "degreenet_out";
  Format format = Format::csv;
  std::string law = "auto";
  std::int64_t node = 1;  ///< 1-based
  std::int64_t k_max = -1;
  int threads = 1;
  std::string sampler = "sparse";
  bool write_degrees = false;
  int figure = 0;
  std::string suite;
  std::filesystem::path degrees_file;
  std::filesystem::path edges_file;
  bool one_indexed = false;
  double level = 0.95;
  io::Json raw;

  std::uint64_t require_seed() const;
};

/// Parse a JSON object into a RunConfig. Unknown keys are rejected so typos
/// surface as validation errors.
RunConfig config_from_json(Command command, const io::Json& j);

/// Read a JSON file, apply "key=value" overrides (values parsed as JSON,
/// falling back to a string), then validate.
RunConfig load_config(Command command, const std::optional<std::filesystem::path>& file,
                      const std::vector<std::string>& overrides);

}  // namespace degreenet::cli
