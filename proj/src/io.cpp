#include "degreenet/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "degreenet/errors.hpp"

namespace degreenet::io {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw DomainError("CsvTable: row width mismatch");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out(kSchemaLine);
  out += '\n';
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

std::string law_csv(const DegreeLaw& law) {
  std::vector<std::string> header{"k", "pmf", "provenance", "n"};
  for (const auto& c : law.columns) header.push_back(c.name);
  header.push_back("fallback");
  CsvTable t(header);
  const std::string prov(to_string(law.provenance));
  for (Eigen::Index k = 0; k < law.pmf.size(); ++k) {
    std::vector<std::string> row{std::to_string(k), format_double(law.pmf[k]), prov,
                                 std::to_string(law.n)};
    for (const auto& c : law.columns) row.push_back(format_double(c.values[k]));
    const bool fb = std::find(law.fallback_k.begin(), law.fallback_k.end(), k) !=
                    law.fallback_k.end();
    row.push_back(fb ? "1" : "0");
    t.add_row(std::move(row));
  }
  return t.str();
}

std::string laws_side_by_side_csv(const std::vector<NamedLaw>& laws) {
  std::vector<std::string> header{"k"};
  Eigen::Index K = 0;
  for (const auto& l : laws) {
    header.push_back(l.name);
    K = std::max(K, l.law->pmf.size());
  }
  CsvTable t(header);
  for (Eigen::Index k = 0; k < K; ++k) {
    std::vector<std::string> row{std::to_string(k)};
    for (const auto& l : laws) {
      row.push_back(k < l.law->pmf.size() ? format_double(l.law->pmf[k]) : "");
    }
    t.add_row(std::move(row));
  }
  return t.str();
}

Json law_json(const DegreeLaw& law) {
  Json j;
  j["provenance"] = std::string(to_string(law.provenance));
  j["n"] = law.n;
  j["mean"] = law.mean;
  j["variance"] = law.variance;
  j["mass_defect"] = law.mass_defect;
  j["pmf"] = std::vector<double>(law.pmf.data(), law.pmf.data() + law.pmf.size());
  for (const auto& c : law.columns) {
    j["columns"][c.name] = std::vector<double>(c.values.data(), c.values.data() + c.values.size());
  }
  j["fallback_k"] = law.fallback_k;
  return j;
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path.string(), "cannot open for writing");
  out << text;
  if (!out) throw ConfigError(path.string(), "write failed");
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  const auto res = std::to_chars(buf, buf + 16, x, 16);
  std::string s(buf, res.ptr);
  return std::string(16 - s.size(), '0') + s;
}

double number_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    try {
      std::size_t used = 0;
      if (slash == std::string::npos) {
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
      } else {
        const std::string num = s.substr(0, slash);
        const std::string den = s.substr(slash + 1);
        std::size_t u1 = 0, u2 = 0;
        const double p = std::stod(num, &u1);
        const double q = std::stod(den, &u2);
        if (u1 == num.size() && u2 == den.size() && q != 0.0) return p / q;
      }
    } catch (const std::exception&) {
    }
  }
  throw ConfigError(where, "expected a number or \"p/q\" fraction, got " + j.dump());
}

namespace {

double req(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + "." + key, "missing required field");
  return number_from_json(j.at(key), where + "." + key);
}

double opt(const Json& j, const char* key, double def, const std::string& where) {
  return j.contains(key) ? number_from_json(j.at(key), where + "." + key) : def;
}

std::vector<double> num_array(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw ConfigError(where + "." + key, "expected an array of numbers");
  }
  std::vector<double> v;
  std::size_t i = 0;
  for (const auto& x : j.at(key)) {
    v.push_back(number_from_json(x, where + "." + key + "[" + std::to_string(i++) + "]"));
  }
  return v;
}

template <class F>
auto wrap_model(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ModelError& e) {
    throw ConfigError(where, e.what());
  }
}

}  // namespace

WeightModel weight_model_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError(where + ".kind", "missing model kind");
  }
  const std::string kind = j.at("kind").get<std::string>();
  return wrap_model(where, [&]() -> WeightModel {
    if (kind == "power_law") {
      PowerLawModel m{req(j, "gamma", where), opt(j, "theta", 1.0, where)};
      m.validate();
      return m;
    }
    if (kind == "envelope") {
      EnvelopeModel m;
      m.base = {req(j, "gamma", where), opt(j, "theta", 1.0, where)};
      m.grid_x = num_array(j, "xi_x", where);
      m.grid_xi = num_array(j, "xi", where);
      m.xi_min = req(j, "xi_min", where);
      m.xi_max = req(j, "xi_max", where);
      m.validate();
      return m;
    }
    if (kind == "bounded_pareto") {
      return BoundedParetoModel::make(req(j, "beta", where), req(j, "a", where),
                                      req(j, "b", where));
    }
    if (kind == "point_mass") {
      PointMassModel m{req(j, "value", where)};
      m.validate();
      return m;
    }
    if (kind == "smooth") {
      const std::string density = j.value("density", std::string("uniform"));
      SmoothDensityModel m;
      if (density == "uniform") {
        m = SmoothDensityModel::uniform();
      } else if (density == "polynomial") {
        m = SmoothDensityModel::polynomial(j.value("name", std::string("polynomial")),
                                           num_array(j, "coefficients", where));
      } else {
        throw ConfigError(where + ".density", "unknown density '" + density + "'");
      }
      if (j.contains("f2_sup")) m.f2_sup = req(j, "f2_sup", where);
      return m;
    }
    throw ConfigError(where + ".kind", "unknown model kind '" + kind + "'");
  });
}

Json to_json(const WeightModel& m) {
  Json j;
  if (const auto* p = std::get_if<PowerLawModel>(&m)) {
    j = {{"kind", "power_law"}, {"gamma", p->gamma}, {"theta", p->theta}};
  } else if (const auto* e = std::get_if<EnvelopeModel>(&m)) {
    j = {{"kind", "envelope"}, {"gamma", e->base.gamma}, {"theta", e->base.theta},
         {"xi_x", e->grid_x},  {"xi", e->grid_xi},        {"xi_min", e->xi_min},
         {"xi_max", e->xi_max}};
  } else if (const auto* b = std::get_if<BoundedParetoModel>(&m)) {
    j = {{"kind", "bounded_pareto"}, {"beta", b->beta}, {"a", b->a}, {"b", b->b}, {"c", b->c}};
  } else if (const auto* s = std::get_if<SmoothDensityModel>(&m)) {
    j = {{"kind", "smooth"}, {"name", s->name}};
    if (s->name == "uniform") {
      j["density"] = "uniform";
    } else {
      j["density"] = "polynomial";
      j["coefficients"] = s->poly;
    }
    j["f2_sup"] = s->f2_sup;
    j["mu"] = s->mu;
    j["sigma2"] = s->sigma2;
  } else if (const auto* pm = std::get_if<PointMassModel>(&m)) {
    j = {{"kind", "point_mass"}, {"value", pm->value}};
  }
  return j;
}

ScalingMap scaling_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  ScalingMap m;
  m.gamma = opt(j, "gamma", 0.0, where);
  m.zeta = opt(j, "zeta", 1.0, where);
  m.gamma_prime = opt(j, "gamma_prime", 0.0, where);
  m.zeta_prime = opt(j, "zeta_prime", 0.0, where);
  return wrap_model(where, [&] {
    m.validate();
    return m;
  });
}

Json to_json(const ScalingMap& m) {
  return {{"gamma", m.gamma},
          {"zeta", m.zeta},
          {"gamma_prime", m.gamma_prime},
          {"zeta_prime", m.zeta_prime}};
}

std::vector<std::uint32_t> read_degree_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open degree file");
  std::vector<std::uint32_t> d;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    long long v;
    std::string rest;
    if (!(ss >> v) || v < 0 || (ss >> rest)) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno),
                        "expected one nonnegative integer");
    }
    d.push_back(static_cast<std::uint32_t>(v));
  }
  return d;
}

std::vector<Edge> read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open edge list");
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    long long a, b;
    std::string rest;
    if (!(ss >> a >> b) || a < 0 || b < 0 || (ss >> rest)) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno),
                        "expected two nonnegative integers");
    }
    edges.emplace_back(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
  }
  return edges;
}

}  // namespace degreenet::io
