#include "degreenet/cli/verify.hpp"

#include <cmath>

#include "degreenet/degree_laws.hpp"
#include "degreenet/errors.hpp"
#include "degreenet/estimate.hpp"
#include "degreenet/sampler.hpp"
#include "degreenet/specfun.hpp"
#include "degreenet/stats.hpp"

namespace degreenet::cli {
namespace {

void add_max(VerifyReport& r, std::string name, double measured, double bound) {
  r.checks.push_back({std::move(name), measured, bound, measured <= bound});
}

void add_range(VerifyReport& r, std::string name, double measured, double lo, double hi) {
  r.checks.push_back({std::move(name), measured, hi, measured >= lo && measured <= hi});
}

VerifyReport suite_specfun() {
  VerifyReport r{"specfun", {}};
  double reflect = 0.0, tail = 0.0, sandwich = 0.0;
  for (std::int64_t n : {10, 50, 200}) {
    for (double mu : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      // Direct upper-tail sum from the top down.
      long double s = 0.0L;
      for (std::int64_t k = n - 1; k >= 0; --k) {
        s += static_cast<long double>(specfun::binom_pmf(k + 1, n, mu));
        const double I = specfun::binom_survival(k, n, mu);
        if (s > 1e-300L) {
          tail = std::max(tail, std::abs(I / static_cast<double>(s) - 1.0));
        }
        const double a = static_cast<double>(k + 1), b = static_cast<double>(n - k);
        reflect = std::max(reflect, std::abs(specfun::reg_inc_beta(mu, a, b) +
                                             specfun::reg_inc_beta(1.0 - mu, b, a) - 1.0));
        const auto sb = specfun::survival_bounds(k, n, mu);
        sandwich = std::max({sandwich, sb.lower - I, I - sb.upper});
      }
    }
  }
  add_max(r, "binomial_tail_vs_direct_sum", tail, 1e-10);
  add_max(r, "beta_reflection", reflect, 1e-13);
  add_max(r, "hoeffding_sandwich_violation", sandwich, 1e-15);
  return r;
}

VerifyReport suite_oracle(const RunConfig& cfg) {
  VerifyReport r{"oracle", {}};
  const std::int64_t n = 12;
  WeightVector pi = materialize_power_law(PowerLawModel{0.5, 1.0}, n);
  if (cfg.model && !is_random(*cfg.model)) pi = generate_weights(*cfg.model, n, 0);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const DegreeLaw law = conditional_degree_law(pi, i);
    std::vector<double> p;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) p.push_back(pi[i] * pi[j]);
    }
    // Enumerate every neighbour subset.
    std::vector<long double> ref(p.size() + 1, 0.0L);
    for (std::uint32_t mask = 0; mask < (1u << p.size()); ++mask) {
      long double w = 1.0L;
      int deg = 0;
      for (std::size_t b = 0; b < p.size(); ++b) {
        if (mask >> b & 1u) {
          w *= p[b];
          ++deg;
        } else {
          w *= 1.0L - p[b];
        }
      }
      ref[deg] += w;
    }
    for (std::size_t k = 0; k < ref.size(); ++k) {
      worst = std::max(worst, std::abs(law.pmf[static_cast<Eigen::Index>(k)] -
                                       static_cast<double>(ref[k])));
    }
  }
  add_max(r, "conditional_law_vs_enumeration", worst, 1e-12);
  return r;
}

VerifyReport suite_moments() {
  VerifyReport r{"moments", {}};
  const WeightVector pi = materialize_power_law(PowerLawModel{0.5, 1.0}, 200);
  double dm = 0.0, dv = 0.0;
  for (Eigen::Index i : {0, 5, 50, 199}) {
    const DegreeLaw law = conditional_degree_law(pi, i);
    const auto m = conditional_moments(pi, i);
    dm = std::max(dm, std::abs(law.mean / m.mean - 1.0));
    dv = std::max(dv, std::abs(law.variance / m.variance - 1.0));
  }
  add_max(r, "conditional_mean", dm, 1e-12);
  add_max(r, "conditional_variance", dv, 1e-12);

  const auto f = SmoothDensityModel::uniform();
  for (std::int64_t n : {50, 200}) {
    const DegreeLaw law = marginal_pmf_quadrature(MixingModel{f}, n);
    const auto m = marginal_moments(f.mu, f.sigma2, n);
    add_max(r, "marginal_dispersion_n" + std::to_string(n),
            std::abs(law.dispersion() / m.dispersion - 1.0), 1e-6);
  }
  return r;
}

// Coverage study for node 1 under a fixed power law, one graph per replicate.
VerifyReport suite_clt(const RunConfig& cfg) {
  VerifyReport r{"clt", {}};
  PopulationSpec spec;
  spec.model = (cfg.model && !is_random(*cfg.model)) ? *cfg.model : WeightModel{PowerLawModel{0.3, 1.0}};
  spec.n = cfg.n >= 2 ? cfg.n : 2000;
  spec.replicates = cfg.raw.contains("replicates") ? cfg.replicates : 2000;
  spec.master_seed = cfg.master_seed.value_or(20240101);
  std::vector<double> zs;
  std::size_t covered = 0;
  sample_population(
      spec,
      [&](const GraphSample& g, const WeightVector& pi) {
        const EstimateReport rep = clt_report(g.degrees, cfg.level);
        zs.push_back((rep.pi_hat[0] - pi[0]) / rep.std_errors[0]);
        if (rep.lower[0] <= pi[0] && pi[0] <= rep.upper[0]) ++covered;
      },
      cfg.threads);
  const auto ks = stats::ks_one_sample(zs, specfun::normal_cdf);
  add_max(r, "ks_statistic", ks.statistic, 0.05);
  add_range(r, "coverage", static_cast<double>(covered) / static_cast<double>(zs.size()),
            cfg.level - 0.02, cfg.level + 0.02);
  return r;
}

}  // namespace

bool VerifyReport::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

io::Json VerifyReport::json() const {
  io::Json j;
  j["suite"] = suite;
  j["pass"] = all_pass();
  j["checks"] = io::Json::array();
  for (const auto& c : checks) {
    j["checks"].push_back(
        {{"name", c.name}, {"measured", c.measured}, {"bound", c.bound}, {"pass", c.pass}});
  }
  return j;
}

std::vector<std::string> suite_names() { return {"specfun", "oracle", "moments", "clt"}; }

VerifyReport run_suite(const std::string& suite, const RunConfig& cfg) {
  if (suite == "specfun") return suite_specfun();
  if (suite == "oracle") return suite_oracle(cfg);
  if (suite == "moments") return suite_moments();
  if (suite == "clt") return suite_clt(cfg);
  throw ConfigError("suite", "unknown suite '" + suite + "'");
}

}  // namespace degreenet::cli
