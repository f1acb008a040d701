#include "degreenet/cli/config.hpp"

#include <fstream>
#include <set>

#include "degreenet/errors.hpp"
#include "degreenet/parallel.hpp"

namespace degreenet::cli {

std::string to_string(Command c) {
  switch (c) {
    case Command::exact_pmf: return "exact-pmf";
    case Command::simulate: return "simulate";
    case Command::figure: return "figure";
    case Command::estimate: return "estimate";
    case Command::verify: return "verify";
  }
  return "unknown";
}

std::uint64_t RunConfig::require_seed() const {
  if (!master_seed) throw ConfigError("master_seed", "required for randomized runs");
  return *master_seed;
}

namespace {

const std::set<std::string> kKeys = {
    "model",     "scaling", "n",     "replicates",    "master_seed", "output_dir",
    "format",    "law",     "node",  "k_max",         "threads",     "sampler",
    "write_degrees", "figure", "suite", "degrees_file", "edges_file", "one_indexed",
    "level"};

std::int64_t get_int(const io::Json& j, const char* key) {
  const io::Json& v = j.at(key);
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == std::floor(d)) return static_cast<std::int64_t>(d);
  }
  throw ConfigError(key, "expected an integer, got " + v.dump());
}

std::string get_str(const io::Json& j, const char* key) {
  if (!j.at(key).is_string()) throw ConfigError(key, "expected a string");
  return j.at(key).get<std::string>();
}

bool get_bool(const io::Json& j, const char* key) {
  if (!j.at(key).is_boolean()) throw ConfigError(key, "expected true or false");
  return j.at(key).get<bool>();
}

}  // namespace

RunConfig config_from_json(Command command, const io::Json& j) {
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kKeys.count(key)) throw ConfigError(key, "unknown configuration key");
  }
  RunConfig c;
  c.command = command;
  c.raw = j;
  c.raw.erase("threads");
  if (j.contains("model")) c.model = io::weight_model_from_json(j.at("model"), "model");
  if (j.contains("scaling")) c.scaling = io::scaling_from_json(j.at("scaling"), "scaling");
  if (j.contains("n")) {
    c.n = get_int(j, "n");
    if (c.n < 2) throw ConfigError("n", "must be >= 2");
  }
  if (j.contains("replicates")) {
    const auto r = get_int(j, "replicates");
    if (r < 1) throw ConfigError("replicates", "must be >= 1");
    c.replicates = static_cast<std::uint64_t>(r);
  }
  if (j.contains("master_seed")) {
    const io::Json& v = j.at("master_seed");
    if (v.is_number_unsigned()) {
      c.master_seed = v.get<std::uint64_t>();
    } else if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
      c.master_seed = static_cast<std::uint64_t>(v.get<std::int64_t>());
    } else if (v.is_string()) {
      try {
        c.master_seed = std::stoull(v.get<std::string>(), nullptr, 0);
      } catch (const std::exception&) {
        throw ConfigError("master_seed", "not an unsigned 64-bit integer");
      }
    } else {
      throw ConfigError("master_seed", "not an unsigned 64-bit integer");
    }
  }
  if (j.contains("output_dir")) c.output_dir = get_str(j, "output_dir");
  if (j.contains("format")) {
    const std::string f = get_str(j, "format");
    if (f == "csv") c.format = Format::csv;
    else if (f == "json") c.format = Format::json;
    else throw ConfigError("format", "expected csv or json");
  }
  if (j.contains("law")) {
    c.law = get_str(j, "law");
    static const std::set<std::string> laws = {"auto",  "conditional", "marginal", "pareto",
                                               "smooth", "sparse",     "extreme"};
    if (!laws.count(c.law)) throw ConfigError("law", "unknown law '" + c.law + "'");
  }
  if (j.contains("node")) {
    c.node = get_int(j, "node");
    if (c.node < 1) throw ConfigError("node", "1-based index must be >= 1");
  }
  if (j.contains("k_max")) c.k_max = get_int(j, "k_max");
  c.threads = j.contains("threads") ? static_cast<int>(get_int(j, "threads")) : default_threads();
  if (c.threads < 1) throw ConfigError("threads", "must be >= 1");
  if (j.contains("sampler")) {
    c.sampler = get_str(j, "sampler");
    if (c.sampler != "dense" && c.sampler != "sparse") {
      throw ConfigError("sampler", "expected dense or sparse");
    }
  }
  if (j.contains("write_degrees")) c.write_degrees = get_bool(j, "write_degrees");
  if (j.contains("figure")) {
    c.figure = static_cast<int>(get_int(j, "figure"));
    if (c.figure < 1 || c.figure > 3) throw ConfigError("figure", "expected 1, 2 or 3");
  }
  if (j.contains("suite")) c.suite = get_str(j, "suite");
  if (j.contains("degrees_file")) c.degrees_file = get_str(j, "degrees_file");
  if (j.contains("edges_file")) c.edges_file = get_str(j, "edges_file");
  if (j.contains("one_indexed")) c.one_indexed = get_bool(j, "one_indexed");
  if (j.contains("level")) {
    c.level = io::number_from_json(j.at("level"), "level");
    if (!(c.level > 0.0 && c.level < 1.0)) throw ConfigError("level", "must lie in (0, 1)");
  }
  return c;
}

namespace {

void set_path(io::Json& j, const std::string& dotted, io::Json value) {
  io::Json* cur = &j;
  std::size_t start = 0;
  for (;;) {
    const auto dot = dotted.find('.', start);
    const std::string part = dotted.substr(start, dot - start);
    if (part.empty()) throw ConfigError(dotted, "malformed override key");
    if (dot == std::string::npos) {
      (*cur)[part] = std::move(value);
      return;
    }
    cur = &(*cur)[part];
    if (!cur->is_object() && !cur->is_null()) {
      throw ConfigError(dotted, "cannot descend into a non-object");
    }
    start = dot + 1;
  }
}

}  // namespace

RunConfig load_config(Command command, const std::optional<std::filesystem::path>& file,
                      const std::vector<std::string>& overrides) {
  io::Json j = io::Json::object();
  if (file) {
    std::ifstream in(*file);
    if (!in) throw ConfigError(file->string(), "cannot open config file");
    try {
      j = io::Json::parse(in);
    } catch (const io::Json::parse_error& e) {
      throw ConfigError(file->string() + " (byte " + std::to_string(e.byte) + ")",
                        "invalid JSON");
    }
  }
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(ov, "override must be key=value");
    const std::string key = ov.substr(0, eq);
    const std::string text = ov.substr(eq + 1);
    io::Json value;
    try {
      value = io::Json::parse(text);
    } catch (const io::Json::parse_error&) {
      value = text;
    }
    set_path(j, key, std::move(value));
  }
  return config_from_json(command, j);
}

}  // namespace degreenet::cli
