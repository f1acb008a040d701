#include "degreenet/cli/commands.hpp"

#include <cmath>
#include <map>

#include "degreenet/degree_laws.hpp"
#include "degreenet/errors.hpp"
#include "degreenet/estimate.hpp"
#include "degreenet/sampler.hpp"
#include "degreenet/specfun.hpp"

namespace degreenet::cli {
namespace {

using io::format_double;

struct Writer {
  const RunConfig& cfg;
  RunOutput out;

  void file(const std::string& name, const std::string& text) {
    io::write_file(cfg.output_dir / name, text);
    out.files.push_back(name);
  }

  RunOutput finish() {
    io::Json m;
    m["tool"] = "degreenet";
    m["version"] = DEGREENET_VERSION;
    m["command"] = to_string(cfg.command);
    m["config"] = cfg.raw;
    // Where results land does not change them, so it stays out of the hash.
    io::Json hashed = cfg.raw;
    hashed.erase("output_dir");
    m["config_hash"] = io::hex64(io::fnv1a(hashed.dump()));
    if (cfg.master_seed) m["master_seed"] = *cfg.master_seed;
    m["outputs"] = out.files;
    m["summary"] = out.summary;
    io::write_file(cfg.output_dir / "manifest.json", m.dump(2) + "\n");
    out.files.push_back("manifest.json");
    return out;
  }
};

std::string cell(double x) { return std::isfinite(x) ? format_double(x) : ""; }

struct NamedColumn {
  std::string name;
  Eigen::ArrayXd values;
};

std::string columns_csv(const std::vector<NamedColumn>& cols) {
  std::vector<std::string> header{"k"};
  Eigen::Index K = 0;
  for (const auto& c : cols) {
    header.push_back(c.name);
    K = std::max(K, c.values.size());
  }
  io::CsvTable t(header);
  for (Eigen::Index k = 0; k < K; ++k) {
    std::vector<std::string> row{std::to_string(k)};
    for (const auto& c : cols) row.push_back(k < c.values.size() ? cell(c.values[k]) : "");
    t.add_row(std::move(row));
  }
  return t.str();
}

const WeightModel& need_model(const RunConfig& cfg) {
  if (!cfg.model) throw ConfigError("model", "missing model block");
  return *cfg.model;
}

std::int64_t need_n(const RunConfig& cfg) {
  if (cfg.n < 2) throw ConfigError("n", "missing or < 2");
  return cfg.n;
}

const SmoothDensityModel& need_smooth(const RunConfig& cfg) {
  const auto* s = std::get_if<SmoothDensityModel>(&need_model(cfg));
  if (!s) throw ConfigError("model.kind", "law '" + cfg.law + "' needs a smooth density model");
  return *s;
}

void emit_law(Writer& w, const DegreeLaw& law) {
  if (w.cfg.format == Format::json) {
    w.file("pmf.json", io::law_json(law).dump(2) + "\n");
  } else {
    w.file("pmf.csv", io::law_csv(law));
  }
  w.out.summary["provenance"] = std::string(to_string(law.provenance));
  w.out.summary["mean"] = law.mean;
  w.out.summary["variance"] = law.variance;
  w.out.summary["mass_defect"] = law.mass_defect;
}

std::string resolve_law(const RunConfig& cfg) {
  if (cfg.law != "auto") return cfg.law;
  const WeightModel& m = need_model(cfg);
  if (std::holds_alternative<BoundedParetoModel>(m)) return "pareto";
  if (std::holds_alternative<SmoothDensityModel>(m)) {
    if (cfg.scaling && cfg.scaling->gamma == 0.5 && cfg.n == 0) return "extreme";
    if (cfg.scaling && cfg.scaling->gamma > 0.0) return "sparse";
    return "smooth";
  }
  if (std::holds_alternative<PointMassModel>(m)) return "marginal";
  return "conditional";
}

std::vector<std::uint64_t> pooled_histogram_add(std::vector<std::uint64_t>& h,
                                                const std::vector<std::uint32_t>& d) {
  for (auto x : d) {
    if (x >= h.size()) h.resize(x + 1, 0);
    ++h[x];
  }
  return h;
}

struct SimulationResult {
  std::vector<std::uint64_t> pooled;
  std::vector<std::uint64_t> node_hist;
  std::string replicate_csv;
  std::string degrees_csv;
  double mean_edges = 0.0;
};

SimulationResult simulate(const RunConfig& cfg, const WeightModel& model, std::int64_t n,
                          std::uint64_t replicates, bool keep_degrees) {
  PopulationSpec spec;
  spec.model = model;
  spec.scaling = cfg.scaling;
  spec.n = n;
  spec.replicates = replicates;
  spec.master_seed = cfg.require_seed();
  spec.kind = cfg.sampler == "dense" ? SamplerKind::dense : SamplerKind::sparse;
  if (cfg.node > n) throw ConfigError("node", "exceeds n");

  SimulationResult res;
  io::CsvTable rep({"replicate_id", "k", "count"});
  io::CsvTable deg({"replicate_id", "node", "degree"});
  std::uint64_t edges = 0;
  const auto node = static_cast<std::size_t>(cfg.node - 1);
  sample_population(
      spec,
      [&](const GraphSample& g, const WeightVector&) {
        pooled_histogram_add(res.pooled, g.degrees);
        std::map<std::uint32_t, std::uint64_t> h;
        for (auto x : g.degrees) ++h[x];
        for (const auto& [k, c] : h) {
          rep.add_row({std::to_string(g.replicate_id), std::to_string(k), std::to_string(c)});
        }
        const std::uint32_t dn = g.degrees[node];
        if (dn >= res.node_hist.size()) res.node_hist.resize(dn + 1, 0);
        ++res.node_hist[dn];
        if (keep_degrees) {
          for (std::size_t i = 0; i < g.degrees.size(); ++i) {
            deg.add_row({std::to_string(g.replicate_id), std::to_string(i + 1),
                         std::to_string(g.degrees[i])});
          }
        }
        edges += g.edge_count;
      },
      cfg.threads);
  res.replicate_csv = rep.str();
  if (keep_degrees) res.degrees_csv = deg.str();
  res.mean_edges = static_cast<double>(edges) / static_cast<double>(replicates);
  return res;
}

std::string histogram_csv(const std::vector<std::uint64_t>& h) {
  io::CsvTable t({"k", "count"});
  for (std::size_t k = 0; k < h.size(); ++k) t.add_row({std::to_string(k), std::to_string(h[k])});
  return t.str();
}

io::Json histogram_summary(const std::vector<std::uint64_t>& h) {
  // Integer moment sums keep the summary independent of accumulation order.
  unsigned __int128 s0 = 0, s1 = 0, s2 = 0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    s0 += h[k];
    s1 += static_cast<unsigned __int128>(h[k]) * k;
    s2 += static_cast<unsigned __int128>(h[k]) * k * k;
  }
  const double n0 = static_cast<double>(s0);
  const double mean = static_cast<double>(s1) / n0;
  const double var = static_cast<double>(s2) / n0 - mean * mean;
  io::Json j;
  j["observations"] = static_cast<std::uint64_t>(s0);
  j["mean"] = mean;
  j["variance"] = var;
  j["dispersion"] = mean > 0.0 ? var / mean : 0.0;
  return j;
}

// log-log least squares slope of pmf over [k_lo, k_hi].
double loglog_slope(const Eigen::ArrayXd& pmf, std::int64_t k_lo, std::int64_t k_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
  for (std::int64_t k = k_lo; k <= k_hi && k < pmf.size(); ++k) {
    if (!(pmf[k] > 0.0)) continue;
    const double x = std::log(static_cast<double>(k));
    const double y = std::log(pmf[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    m += 1;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

RunOutput figure1(const RunConfig& cfg) {
  Writer w{cfg, {}};
  const std::int64_t n = cfg.n >= 2 ? cfg.n : 500;
  io::CsvTable curve({"k", "survival", "lower", "upper", "normal_approx"});
  for (std::int64_t k = 0; k < n; ++k) {
    const auto sb = specfun::survival_bounds(k, n, 0.5);
    curve.add_row({std::to_string(k), format_double(specfun::binom_survival(k, n, 0.5)),
                   format_double(sb.lower), format_double(sb.upper),
                   format_double(sb.normal_approx)});
  }
  w.file("fig1_curve.csv", curve.str());
  io::CsvTable surface({"k", "mu", "survival"});
  const std::int64_t step = std::max<std::int64_t>(1, n / 100);
  for (std::int64_t k = 0; k < n; k += step) {
    for (int m = 1; m <= 49; ++m) {
      const double mu = m / 50.0;
      surface.add_row({std::to_string(k), format_double(mu),
                       format_double(specfun::binom_survival(k, n, mu))});
    }
  }
  w.file("fig1_surface.csv", surface.str());
  w.out.summary["n"] = n;
  w.out.summary["midpoint_k"] = 0.5 * static_cast<double>(n);
  return w.finish();
}

RunOutput figure2(const RunConfig& cfg) {
  Writer w{cfg, {}};
  const WeightModel model =
      cfg.model ? *cfg.model : WeightModel{BoundedParetoModel::make(3.0, 1.0 / 3.0, 1.0)};
  const auto* bp = std::get_if<BoundedParetoModel>(&model);
  if (!bp) throw ConfigError("model.kind", "figure 2 needs a bounded_pareto model");
  const std::int64_t n = cfg.n >= 2 ? cfg.n : 1000;
  const std::uint64_t reps = cfg.raw.contains("replicates") ? cfg.replicates : 500;
  const double beta = bp->beta;
  const double mu = bp->raw_moment(1);
  const double dn = static_cast<double>(n);
  const double nmu = dn * mu;

  const DegreeLaw closed = pareto_population_pmf(*bp, n);
  const DegreeLaw quadl = marginal_pmf_quadrature(MixingModel{*bp}, n);
  const SimulationResult sim = simulate(cfg, model, n, reps, false);

  const Eigen::Index K = n;
  Eigen::ArrayXd emp = Eigen::ArrayXd::Zero(K);
  const double total = dn * static_cast<double>(reps);
  for (std::size_t k = 0; k < sim.pooled.size() && static_cast<Eigen::Index>(k) < K; ++k) {
    emp[static_cast<Eigen::Index>(k)] = static_cast<double>(sim.pooled[k]) / total;
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Eigen::ArrayXd power = Eigen::ArrayXd::Constant(K, nan);
  Eigen::ArrayXd cutoff = Eigen::ArrayXd::Constant(K, nan);
  Eigen::ArrayXd taylor = Eigen::ArrayXd::Constant(K, nan);
  Eigen::ArrayXd resid = Eigen::ArrayXd::Constant(K, nan);
  const double xb = mu * bp->b;
  const double sd = std::sqrt(dn * xb * (1.0 - xb));
  for (Eigen::Index k = 1; k < K; ++k) {
    const double dk = static_cast<double>(k);
    power[k] = bp->c * std::pow(dk / nmu, -beta) / nmu;
    if (dk + 1.0 - beta > 0.0) cutoff[k] = specfun::reg_inc_beta(xb, dk + 1.0 - beta, dn - dk);
    taylor[k] = specfun::normal_sf((dk - beta - dn * xb) / sd);
    if (emp[k] > 0.0 && cutoff[k] > 0.0) {
      resid[k] = std::log(emp[k]) - std::log(power[k] * cutoff[k]);
    }
  }
  w.file("fig2.csv", columns_csv({{"empirical", emp},
                                  {"closed_form", closed.pmf},
                                  {"quadrature", quadl.pmf},
                                  {"power_law", power},
                                  {"cutoff", cutoff},
                                  {"cutoff_taylor", taylor},
                                  {"log_residual", resid}}));
  w.file("fig2_histogram.csv", histogram_csv(sim.pooled));

  double max_rel = 0.0;
  for (Eigen::Index k = 0; k < K; ++k) {
    if (static_cast<double>(k) > beta && quadl.pmf[k] > 1e-12) {
      max_rel = std::max(max_rel, std::abs(closed.pmf[k] / quadl.pmf[k] - 1.0));
    }
  }
  w.out.summary["n"] = n;
  w.out.summary["replicates"] = reps;
  w.out.summary["mu"] = mu;
  w.out.summary["lower_edge"] = nmu * bp->a;
  w.out.summary["upper_edge"] = nmu * bp->b;
  w.out.summary["max_rel_closed_vs_quadrature"] = max_rel;
  w.out.summary["interior_slope"] =
      loglog_slope(closed.pmf, static_cast<std::int64_t>(std::ceil(0.5 * nmu)),
                   static_cast<std::int64_t>(std::floor(0.8 * nmu)));
  w.out.summary["empirical"] = histogram_summary(sim.pooled);
  return w.finish();
}

RunOutput figure3(const RunConfig& cfg) {
  Writer w{cfg, {}};
  const std::int64_t n = cfg.n >= 2 ? cfg.n : 500;
  const double dn = static_cast<double>(n);
  std::vector<NamedColumn> cols;
  io::Json dev = io::Json::object();
  for (const auto& f : figure3_densities()) {
    const DegreeLaw approx = smooth_repro_pmf(f, n);
    const DegreeLaw quadl = marginal_pmf_quadrature(MixingModel{f}, n);
    const double nmu = dn * f.mu;
    Eigen::ArrayXd target(n);
    double max_dev = 0.0, max_err = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
      const double dk = static_cast<double>(k);
      target[k] = f.f(std::min(dk / nmu, 1.0));
      if (dk <= nmu) max_dev = std::max(max_dev, std::abs(nmu * quadl.pmf[k] - target[k]));
      max_err = std::max(max_err, nmu * std::abs(quadl.pmf[k] - approx.pmf[k]));
    }
    cols.push_back({f.name + "_quadrature", nmu * quadl.pmf});
    cols.push_back({f.name + "_approx", nmu * approx.pmf});
    cols.push_back({f.name + "_heuristic", nmu * *approx.column("heuristic")});
    cols.push_back({f.name + "_target", target});
    dev[f.name] = {{"mu", f.mu},
                   {"c", f.c_const()},
                   {"max_deviation_k_le_nmu", max_dev},
                   {"max_scaled_approx_error", max_err}};
  }
  w.file("fig3.csv", columns_csv(cols));
  w.out.summary["n"] = n;
  w.out.summary["densities"] = dev;
  return w.finish();
}

}  // namespace

std::vector<SmoothDensityModel> figure3_densities() {
  return {SmoothDensityModel::polynomial("linear", {2.0 / 3.0, 2.0 / 3.0}),
          SmoothDensityModel::polynomial("quadratic", {0.75, 1.5, -1.5}),
          SmoothDensityModel::polynomial("cubic", {4.0 / 3.0, 0.0, -2.0, 4.0 / 3.0})};
}

RunOutput cmd_exact_pmf(const RunConfig& cfg) {
  Writer w{cfg, {}};
  const std::string law = resolve_law(cfg);
  LawOptions opts;
  opts.k_max = cfg.k_max;
  w.out.summary["law"] = law;

  if (law == "conditional") {
    const std::int64_t n = need_n(cfg);
    const WeightModel& m = need_model(cfg);
    const std::uint64_t seed = is_random(m) ? cfg.require_seed() : cfg.master_seed.value_or(0);
    WeightVector pi = generate_weights(m, n, seed);
    if (cfg.scaling) pi = apply_scaling(pi, *cfg.scaling, n);
    if (cfg.node > n) throw ConfigError("node", "exceeds n");
    const auto i = static_cast<Eigen::Index>(cfg.node - 1);
    const DegreeLaw l = conditional_degree_law(pi, i);
    emit_law(w, l);
    try {
      const auto cm = conditional_moments(pi, i);
      w.out.summary["analytic_mean"] = cm.mean;
      w.out.summary["analytic_variance"] = cm.variance;
      w.out.summary["dispersion"] = cm.dispersion;
    } catch (const DegenerateError&) {
      w.out.summary["dispersion"] = nullptr;
    }
  } else if (law == "marginal") {
    const std::int64_t n = need_n(cfg);
    const auto F = as_mixing(need_model(cfg));
    if (!F) throw ConfigError("model.kind", "marginal law needs a random or point-mass model");
    const DegreeLaw l = marginal_pmf_quadrature(*F, n, opts);
    emit_law(w, l);
    const auto mm = mixing_moments(*F);
    const auto mom = marginal_moments(mm.mu, mm.sigma2, n);
    w.out.summary["analytic_mean"] = mom.mean;
    w.out.summary["analytic_variance"] = mom.variance;
    w.out.summary["analytic_dispersion"] = mom.dispersion;
  } else if (law == "pareto") {
    const std::int64_t n = need_n(cfg);
    const auto* bp = std::get_if<BoundedParetoModel>(&need_model(cfg));
    if (!bp) throw ConfigError("model.kind", "pareto law needs a bounded_pareto model");
    const DegreeLaw closed = pareto_population_pmf(*bp, n, opts);
    const DegreeLaw quadl = marginal_pmf_quadrature(MixingModel{*bp}, n, opts);
    emit_law(w, closed);
    w.file("compare.csv", columns_csv({{"closed_form", closed.pmf},
                                       {"quadrature", quadl.pmf},
                                       {"closed_form_leading", *closed.column("pmf_leading")},
                                       {"eps_exact", *closed.column("eps_exact")},
                                       {"eps_leading", *closed.column("eps_leading")}}));
  } else if (law == "smooth") {
    const std::int64_t n = need_n(cfg);
    const SmoothDensityModel& f = need_smooth(cfg);
    const DegreeLaw approx = smooth_repro_pmf(f, n, opts);
    const DegreeLaw quadl = marginal_pmf_quadrature(MixingModel{f}, n, opts);
    emit_law(w, approx);
    w.file("compare.csv", columns_csv({{"smooth_repro", approx.pmf},
                                       {"quadrature", quadl.pmf},
                                       {"heuristic", *approx.column("heuristic")}}));
  } else if (law == "sparse") {
    const std::int64_t n = need_n(cfg);
    if (!cfg.scaling) throw ConfigError("scaling", "sparse law needs a scaling block");
    emit_law(w, sparse_pmf(need_smooth(cfg), *cfg.scaling, n, opts));
    w.out.summary["mu_n"] = cfg.scaling->mu_n(need_smooth(cfg).mu, n);
  } else if (law == "extreme") {
    const SmoothDensityModel& f = need_smooth(cfg);
    if (!cfg.scaling) throw ConfigError("scaling", "extreme law needs a scaling block (zeta)");
    const double lam = f.mu * cfg.scaling->zeta;
    const std::int64_t k_max =
        cfg.k_max >= 0 ? cfg.k_max
                       : static_cast<std::int64_t>(std::ceil(lam + 12.0 * std::sqrt(lam) + 40.0));
    emit_law(w, extreme_sparse_pmf(f, cfg.scaling->zeta, k_max));
  }
  return w.finish();
}

RunOutput cmd_simulate(const RunConfig& cfg) {
  Writer w{cfg, {}};
  const std::int64_t n = need_n(cfg);
  const bool keep = cfg.write_degrees || cfg.replicates == 1;
  const SimulationResult sim = simulate(cfg, need_model(cfg), n, cfg.replicates, keep);
  w.file("histogram.csv", histogram_csv(sim.pooled));
  w.file("replicate_histograms.csv", sim.replicate_csv);
  w.file("node_histogram.csv", histogram_csv(sim.node_hist));
  if (keep) w.file("degrees.csv", sim.degrees_csv);
  w.out.summary["pooled"] = histogram_summary(sim.pooled);
  w.out.summary["mean_edge_count"] = sim.mean_edges;
  w.out.summary["node"] = cfg.node;
  return w.finish();
}

RunOutput cmd_figure(const RunConfig& cfg) {
  switch (cfg.figure) {
    case 1: return figure1(cfg);
    case 2: return figure2(cfg);
    case 3: return figure3(cfg);
    default: throw ConfigError("figure", "expected 1, 2 or 3");
  }
}

RunOutput cmd_estimate(const RunConfig& cfg) {
  Writer w{cfg, {}};
  std::vector<std::uint32_t> degrees;
  if (!cfg.degrees_file.empty()) {
    degrees = io::read_degree_file(cfg.degrees_file);
  } else if (!cfg.edges_file.empty()) {
    const auto edges = io::read_edge_list(cfg.edges_file);
    std::size_t n = cfg.n > 0 ? static_cast<std::size_t>(cfg.n) : 0;
    if (n == 0) {
      for (const auto& [a, b] : edges) n = std::max<std::size_t>(n, std::max(a, b) + 1);
      if (cfg.one_indexed && n > 0) n -= 1;
    }
    degrees = degrees_from_edges(edges, n, cfg.one_indexed);
  } else {
    throw ConfigError("degrees_file", "estimate needs degrees_file or edges_file");
  }
  const EstimateReport r = clt_report(degrees, cfg.level);
  io::CsvTable t({"node", "degree", "pi_hat", "std_error", "lower", "upper"});
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    t.add_row({std::to_string(i + 1), std::to_string(degrees[i]), format_double(r.pi_hat[k]),
               format_double(r.std_errors[k]), format_double(r.lower[k]),
               format_double(r.upper[k])});
  }
  if (cfg.format == Format::json) {
    io::Json j;
    j["degree_sum"] = r.degree_sum;
    j["level"] = r.level;
    j["z"] = r.z;
    j["pi_hat"] = std::vector<double>(r.pi_hat.data(), r.pi_hat.data() + r.pi_hat.size());
    j["std_errors"] =
        std::vector<double>(r.std_errors.data(), r.std_errors.data() + r.std_errors.size());
    w.file("estimate.json", j.dump(2) + "\n");
  } else {
    w.file("estimate.csv", t.str());
  }
  w.out.summary["degree_sum"] = r.degree_sum;
  w.out.summary["level"] = r.level;
  w.out.summary["z"] = r.z;
  w.out.summary["low_degree_warning"] = r.low_degree_warning;
  try {
    const ExponentFit fit = fit_exponent(degrees);
    w.out.summary["fit"] = {{"gamma_hat", fit.gamma_hat},
                            {"theta_hat", fit.theta_hat},
                            {"r_squared", fit.r_squared},
                            {"residual_sd", fit.residual_sd},
                            {"ranks_used", fit.ranks_used},
                            {"min_degree", fit.min_degree}};
  } catch (const InsufficientDataError& e) {
    w.out.summary["fit"] = {{"error", e.what()}};
  }
  return w.finish();
}

RunOutput run(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::exact_pmf: return cmd_exact_pmf(cfg);
    case Command::simulate: return cmd_simulate(cfg);
    case Command::figure: return cmd_figure(cfg);
    case Command::estimate: return cmd_estimate(cfg);
    case Command::verify: break;
  }
  throw ConfigError("command", "verify is dispatched separately");
}

}  // namespace degreenet::cli
