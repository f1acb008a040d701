#include "degreenet/weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "degreenet/errors.hpp"
#include "degreenet/quadrature.hpp"
#include "degreenet/rng.hpp"
#include "degreenet/summation.hpp"

namespace degreenet {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

WeightVector::WeightVector(Eigen::ArrayXd values, std::string model_tag,
                           std::optional<std::uint64_t> seed)
    : values_(std::move(values)), model_tag_(std::move(model_tag)), seed_(seed) {
  if (values_.size() < 2) throw ModelError("weight vector needs n >= 2");
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ModelError("weight " + std::to_string(i + 1) + " = " + std::to_string(v) +
                       " lies outside [0, 1]");
    }
  }
}

double WeightVector::l1() const {
  CompensatedSum s;
  for (double v : values_) s += v;
  return s.value();
}

double WeightVector::l2_squared() const {
  CompensatedSum s;
  for (double v : values_) s += v * v;
  return s.value();
}

Eigen::ArrayXd WeightVector::sorted_descending() const {
  Eigen::ArrayXd out = values_;
  std::sort(out.data(), out.data() + out.size(), std::greater<>());
  return out;
}

void PowerLawModel::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ModelError("power_law: gamma must lie in (0, 1)");
  if (!(theta >= 0.0 && theta <= 1.0)) throw ModelError("power_law: theta must lie in [0, 1]");
}

void EnvelopeModel::validate() const {
  base.validate();
  if (grid_x.size() < 2 || grid_x.size() != grid_xi.size()) {
    throw ModelError("envelope: xi grid needs >= 2 matching (x, xi) points");
  }
  if (grid_x.front() != 0.0 || grid_x.back() != 1.0) {
    throw ModelError("envelope: xi grid must span [0, 1]");
  }
  for (std::size_t i = 1; i < grid_x.size(); ++i) {
    if (!(grid_x[i] > grid_x[i - 1])) throw ModelError("envelope: grid x must increase");
  }
  if (!(xi_min > 0.0 && xi_min <= xi_max && std::isfinite(xi_max))) {
    throw ModelError("envelope: need 0 < xi_min <= xi_max < inf");
  }
  for (double v : grid_xi) {
    if (!(v >= xi_min && v <= xi_max)) {
      throw ModelError("envelope: tabulated xi value " + std::to_string(v) +
                       " outside declared [xi_min, xi_max]");
    }
  }
}

double EnvelopeModel::xi(double x) const {
  if (!(x > 0.0 && x <= 1.0)) throw DomainError("envelope: xi evaluated outside (0, 1]");
  const auto it = std::upper_bound(grid_x.begin(), grid_x.end(), x);
  if (it == grid_x.end()) return grid_xi.back();
  const std::size_t j = static_cast<std::size_t>(it - grid_x.begin());
  const double t = (x - grid_x[j - 1]) / (grid_x[j] - grid_x[j - 1]);
  return grid_xi[j - 1] + t * (grid_xi[j] - grid_xi[j - 1]);
}

BoundedParetoModel BoundedParetoModel::make(double beta, double a, double b) {
  BoundedParetoModel m;
  m.beta = beta;
  m.a = a;
  m.b = b;
  if (!(beta >= 0.0)) throw ModelError("bounded_pareto: beta must be >= 0");
  if (!(a >= 0.0 && a < b && b <= 1.0)) throw ModelError("bounded_pareto: need 0 <= a < b <= 1");
  if (beta >= 1.0 && !(a > 0.0)) throw ModelError("bounded_pareto: need a > 0 when beta >= 1");
  if (beta == 1.0) {
    m.c = 1.0 / std::log(b / a);
  } else {
    m.c = (1.0 - beta) / (std::pow(b, 1.0 - beta) - std::pow(a, 1.0 - beta));
  }
  return m;
}

void BoundedParetoModel::validate() const {
  const BoundedParetoModel ref = make(beta, a, b);
  if (!(std::abs(ref.c - c) <= 1e-12 * ref.c)) {
    throw ModelError("bounded_pareto: normalizer c inconsistent with (beta, a, b)");
  }
}

double BoundedParetoModel::density(double x) const {
  if (x < a || x >= b) return 0.0;
  return c * std::pow(x, -beta);
}

double BoundedParetoModel::cdf(double x) const {
  if (x <= a) return 0.0;
  if (x >= b) return 1.0;
  if (beta == 1.0) return std::log(x / a) / std::log(b / a);
  const double e = 1.0 - beta;
  return (std::pow(x, e) - std::pow(a, e)) / (std::pow(b, e) - std::pow(a, e));
}

double BoundedParetoModel::inverse_cdf(double u) const {
  double x;
  if (beta == 1.0) {
    x = a * std::pow(b / a, u);
  } else {
    const double e = 1.0 - beta;
    const double lo = std::pow(a, e);
    x = std::pow(lo + u * (std::pow(b, e) - lo), 1.0 / e);
  }
  if (x >= b) x = std::nextafter(b, a);
  if (x < a) x = a;
  return x;
}

double BoundedParetoModel::raw_moment(int m) const {
  const double e = m + 1.0 - beta;
  if (e == 0.0) return c * std::log(b / a);
  return c * (std::pow(b, e) - std::pow(a, e)) / e;
}

SmoothDensityModel SmoothDensityModel::make(std::string name, std::function<double(double)> f,
                                            double f2_sup) {
  if (!(f2_sup >= 0.0)) throw ModelError("smooth: sup|f''| must be >= 0");
  SmoothDensityModel m;
  m.name = std::move(name);
  m.f = std::move(f);
  m.f2_sup = f2_sup;
  quad::Options opts;
  opts.abs_tol = 1e-14;
  opts.rel_tol = 1e-13;
  const double mass = quad::integrate(m.f, 0.0, 1.0, {}, opts).value;
  if (!(std::abs(mass - 1.0) <= 1e-8)) {
    throw ModelError("smooth density '" + m.name + "' integrates to " + std::to_string(mass));
  }
  m.mu = quad::integrate([&](double x) { return x * m.f(x); }, 0.0, 1.0, {}, opts).value;
  const double m2 =
      quad::integrate([&](double x) { return x * x * m.f(x); }, 0.0, 1.0, {}, opts).value;
  m.sigma2 = m2 - m.mu * m.mu;
  m.f_min = m.f(0.0);
  m.f_max = m.f_min;
  constexpr int kGrid = 4000;
  for (int i = 1; i <= kGrid; ++i) {
    const double v = m.f(static_cast<double>(i) / kGrid);
    m.f_min = std::min(m.f_min, v);
    m.f_max = std::max(m.f_max, v);
  }
  if (m.f_min < 0.0) throw ModelError("smooth density '" + m.name + "' is negative");
  return m;
}

SmoothDensityModel SmoothDensityModel::polynomial(std::string name, std::vector<double> coeffs) {
  if (coeffs.empty()) throw ModelError("smooth: empty polynomial");
  auto eval = [coeffs](double x) {
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
    return v;
  };
  std::vector<double> d2;
  for (std::size_t j = 2; j < coeffs.size(); ++j) {
    d2.push_back(coeffs[j] * static_cast<double>(j) * static_cast<double>(j - 1));
  }
  double f2 = 0.0;
  if (!d2.empty()) {
    constexpr int kGrid = 10000;
    for (int i = 0; i <= kGrid; ++i) {
      const double x = static_cast<double>(i) / kGrid;
      double v = 0.0;
      for (auto it = d2.rbegin(); it != d2.rend(); ++it) v = v * x + *it;
      f2 = std::max(f2, std::abs(v));
    }
  }
  SmoothDensityModel m = make(std::move(name), eval, f2);
  m.poly = std::move(coeffs);
  return m;
}

SmoothDensityModel SmoothDensityModel::uniform() { return polynomial("uniform", {1.0}); }

void PointMassModel::validate() const {
  if (!(value >= 0.0 && value <= 1.0)) throw ModelError("point_mass: value must lie in [0, 1]");
}

void ScalingMap::validate() const {
  if (!(gamma >= 0.0 && zeta >= 0.0 && gamma_prime >= 0.0 && zeta_prime >= 0.0)) {
    throw ModelError("scaling: all constants must be >= 0");
  }
}

double ScalingMap::mu_n(double mu, std::int64_t n) const {
  return mu * zeta / std::pow(static_cast<double>(n), 2.0 * gamma);
}

MixingMoments mixing_moments(const MixingModel& m) {
  return std::visit(
      overloaded{
          [](const BoundedParetoModel& p) {
            const double mu = p.raw_moment(1);
            return MixingMoments{mu, p.raw_moment(2) - mu * mu};
          },
          [](const SmoothDensityModel& s) { return MixingMoments{s.mu, s.sigma2}; },
          [](const PointMassModel& p) { return MixingMoments{p.value, 0.0}; },
      },
      m);
}

double mixing_density(const MixingModel& m, double x) {
  return std::visit(overloaded{
                        [&](const BoundedParetoModel& p) { return p.density(x); },
                        [&](const SmoothDensityModel& s) {
                          return (x < 0.0 || x > 1.0) ? 0.0 : s.f(x);
                        },
                        [](const PointMassModel&) -> double {
                          throw DomainError("point mass has no density");
                        },
                    },
                    m);
}

std::pair<double, double> mixing_support(const MixingModel& m) {
  return std::visit(overloaded{
                        [](const BoundedParetoModel& p) { return std::pair{p.a, p.b}; },
                        [](const SmoothDensityModel&) { return std::pair{0.0, 1.0}; },
                        [](const PointMassModel& p) { return std::pair{p.value, p.value}; },
                    },
                    m);
}

std::optional<MixingModel> as_mixing(const WeightModel& m) {
  return std::visit(overloaded{
                        [](const BoundedParetoModel& p) -> std::optional<MixingModel> { return p; },
                        [](const SmoothDensityModel& s) -> std::optional<MixingModel> { return s; },
                        [](const PointMassModel& p) -> std::optional<MixingModel> { return p; },
                        [](const auto&) -> std::optional<MixingModel> { return std::nullopt; },
                    },
                    m);
}

bool is_random(const WeightModel& m) {
  return std::holds_alternative<BoundedParetoModel>(m) ||
         std::holds_alternative<SmoothDensityModel>(m);
}

WeightVector materialize_power_law(const PowerLawModel& model, std::int64_t n) {
  model.validate();
  if (n < 2) throw ModelError("power_law: need n >= 2");
  Eigen::ArrayXd v(n);
  for (std::int64_t i = 0; i < n; ++i) {
    v[i] = model.theta * std::pow(static_cast<double>(i + 1), -model.gamma);
  }
  return WeightVector(std::move(v), "power_law");
}

WeightVector materialize_power_law(const EnvelopeModel& model, std::int64_t n) {
  model.validate();
  if (n < 2) throw ModelError("envelope: need n >= 2");
  Eigen::ArrayXd v(n);
  const double dn = static_cast<double>(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double di = static_cast<double>(i + 1);
    v[i] = model.xi(di / dn) * model.base.theta * std::pow(di, -model.base.gamma);
    if (v[i] > 1.0) {
      throw ModelError("envelope: pi_" + std::to_string(i + 1) + " = " + std::to_string(v[i]) +
                       " exceeds 1");
    }
  }
  return WeightVector(std::move(v), "envelope");
}

WeightVector sample_bounded_pareto(const BoundedParetoModel& model, std::int64_t n,
                                   std::uint64_t seed) {
  model.validate();
  rng::Engine eng(seed);
  Eigen::ArrayXd v(n);
  for (std::int64_t i = 0; i < n; ++i) v[i] = model.inverse_cdf(rng::uniform01(eng));
  return WeightVector(std::move(v), "bounded_pareto", seed);
}

WeightVector sample_smooth(const SmoothDensityModel& model, std::int64_t n, std::uint64_t seed) {
  rng::Engine eng(seed);
  const double bound = 1.01 * model.f_max;
  Eigen::ArrayXd v(n);
  for (std::int64_t i = 0; i < n; ++i) {
    for (;;) {
      const double x = rng::uniform01(eng);
      if (rng::uniform01(eng) * bound < model.f(x)) {
        v[i] = x;
        break;
      }
    }
  }
  return WeightVector(std::move(v), "smooth:" + model.name, seed);
}

WeightVector generate_weights(const WeightModel& model, std::int64_t n, std::uint64_t seed) {
  return std::visit(
      overloaded{
          [&](const PowerLawModel& m) { return materialize_power_law(m, n); },
          [&](const EnvelopeModel& m) { return materialize_power_law(m, n); },
          [&](const BoundedParetoModel& m) { return sample_bounded_pareto(m, n, seed); },
          [&](const SmoothDensityModel& m) { return sample_smooth(m, n, seed); },
          [&](const PointMassModel& m) {
            m.validate();
            return WeightVector(Eigen::ArrayXd::Constant(n, m.value), "point_mass");
          },
      },
      model);
}

WeightVector apply_scaling(const WeightVector& pi, const ScalingMap& map, std::int64_t n) {
  map.validate();
  const double dn = static_cast<double>(n);
  const double scale = std::sqrt(map.zeta / std::pow(dn, 2.0 * map.gamma));
  const double shift = std::sqrt(map.zeta_prime / std::pow(dn, 2.0 * map.gamma_prime));
  Eigen::ArrayXd v = (scale * pi.values() + shift).min(1.0);
  return WeightVector(std::move(v), pi.model_tag(), pi.seed());
}

std::string model_kind(const WeightModel& m) {
  return std::visit(overloaded{
                        [](const PowerLawModel&) { return std::string("power_law"); },
                        [](const EnvelopeModel&) { return std::string("envelope"); },
                        [](const BoundedParetoModel&) { return std::string("bounded_pareto"); },
                        [](const SmoothDensityModel&) { return std::string("smooth"); },
                        [](const PointMassModel&) { return std::string("point_mass"); },
                    },
                    m);
}

}  // namespace degreenet
