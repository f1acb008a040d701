#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "degreenet/degree_laws.hpp"
#include "degreenet/sampler.hpp"
#include "degreenet/weights.hpp"
#include "json.hpp"

namespace degreenet::io {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSchemaLine = "# degreenet-schema v1";

/// Shortest round-trip decimal form (std::to_chars), locale independent.
std::string format_double(double x);

/// Column-oriented CSV builder; output starts with the schema comment line.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> cells);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct NamedLaw {
  std::string name;
  const DegreeLaw* law;
};

/// k, pmf, provenance, n and the law's auxiliary columns.
std::string law_csv(const DegreeLaw& law);

/// k followed by one pmf column per law (missing entries left empty).
std::string laws_side_by_side_csv(const std::vector<NamedLaw>& laws);

Json law_json(const DegreeLaw& law);

void write_file(const std::filesystem::path& path, std::string_view text);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);
std::string hex64(std::uint64_t x);

WeightModel weight_model_from_json(const Json& j, const std::string& where = "model");
Json to_json(const WeightModel& m);
ScalingMap scaling_from_json(const Json& j, const std::string& where = "scaling");
Json to_json(const ScalingMap& m);

/// Number or "p/q" fraction string.
double number_from_json(const Json& j, const std::string& where);

/// One count per line; blank lines and '#' comments skipped.
std::vector<std::uint32_t> read_degree_file(const std::filesystem::path& path);

/// Two integer columns per line, whitespace separated.
std::vector<Edge> read_edge_list(const std::filesystem::path& path);

}  // namespace degreenet::io
