#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace degreenet {

/// The weight vector pi in [0,1]^n; edge (i,j) is present with probability
/// pi_i pi_j. Immutable once built. Stored in generation order.
class WeightVector {
 public:
  /// Throws ModelError unless n >= 2 and every value lies in [0, 1].
  WeightVector(Eigen::ArrayXd values, std::string model_tag,
               std::optional<std::uint64_t> seed = std::nullopt);

  const Eigen::ArrayXd& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_[i]; }
  const std::string& model_tag() const { return model_tag_; }
  const std::optional<std::uint64_t>& seed() const { return seed_; }

  double l1() const;
  double l2_squared() const;
  Eigen::ArrayXd sorted_descending() const;

 private:
  Eigen::ArrayXd values_;
  std::string model_tag_;
  std::optional<std::uint64_t> seed_;
};

/// pi_i = theta i^{-gamma}.
struct PowerLawModel {
  double gamma = 0.5;
  double theta = 1.0;
  void validate() const;
};

/// pi_i = xi(i/n) theta i^{-gamma} with xi tabulated on (0,1] and linearly
/// interpolated.
struct EnvelopeModel {
  PowerLawModel base;
  std::vector<double> grid_x;
  std::vector<double> grid_xi;
  double xi_min = 1.0;
  double xi_max = 1.0;

  void validate() const;
  /// Throws DomainError outside (0, 1].
  double xi(double x) const;
};

/// Density c pi^{-beta} on [a, b).
struct BoundedParetoModel {
  double beta = 0.0;
  double a = 0.0;
  double b = 1.0;
  double c = 1.0;

  static BoundedParetoModel make(double beta, double a, double b);
  void validate() const;
  double density(double x) const;
  double cdf(double x) const;
  double inverse_cdf(double u) const;
  /// E(pi^m) in closed form.
  double raw_moment(int m) const;
};

/// Density on [0,1] for the smooth-mixing approximations. `f2_sup` is the
/// user-declared sup |f''|; the approximation constant is c = f2_sup / 2.
struct SmoothDensityModel {
  std::string name;
  std::function<double(double)> f;
  double f2_sup = 0.0;
  double mu = 0.5;
  double sigma2 = 1.0 / 12.0;
  double f_max = 1.0;
  double f_min = 1.0;
  std::vector<double> poly;  ///< coefficients c0 + c1 x + ..., empty if not polynomial

  /// Checks int f = 1 within 1e-8 by quadrature and fills mu, sigma2, f_min, f_max.
  static SmoothDensityModel make(std::string name, std::function<double(double)> f,
                                 double f2_sup);
  static SmoothDensityModel polynomial(std::string name, std::vector<double> coeffs);
  static SmoothDensityModel uniform();
  double c_const() const { return 0.5 * f2_sup; }
};

struct PointMassModel {
  double value = 1.0;
  void validate() const;
};

/// pi(n) = ( sqrt(zeta / n^{2 gamma}) pi + sqrt(zeta' / n^{2 gamma'}) ) ^ 1.
struct ScalingMap {
  double gamma = 0.0;
  double zeta = 1.0;
  double gamma_prime = 0.0;
  double zeta_prime = 0.0;
  void validate() const;
  bool is_identity() const { return gamma == 0.0 && zeta == 1.0 && zeta_prime == 0.0; }
  /// mu_n = mu zeta / n^{2 gamma} (zeta' = 0 case).
  double mu_n(double mu, std::int64_t n) const;
};

using MixingModel = std::variant<BoundedParetoModel, SmoothDensityModel, PointMassModel>;
using WeightModel = std::variant<PowerLawModel, EnvelopeModel, BoundedParetoModel,
                                 SmoothDensityModel, PointMassModel>;

struct MixingMoments {
  double mu = 0.0;
  double sigma2 = 0.0;
};
MixingMoments mixing_moments(const MixingModel& m);

/// Density of the mixing law, for quadrature. Point masses have none.
double mixing_density(const MixingModel& m, double x);
/// Support [lo, hi] of the mixing law.
std::pair<double, double> mixing_support(const MixingModel& m);

/// Convert a weight model to a mixing model when it is random or constant.
std::optional<MixingModel> as_mixing(const WeightModel& m);

bool is_random(const WeightModel& m);

WeightVector materialize_power_law(const PowerLawModel& model, std::int64_t n);
WeightVector materialize_power_law(const EnvelopeModel& model, std::int64_t n);

/// i.i.d. draws by inverse CDF, seeded from `seed`.
WeightVector sample_bounded_pareto(const BoundedParetoModel& model, std::int64_t n,
                                   std::uint64_t seed);
/// i.i.d. draws by rejection against f_max.
WeightVector sample_smooth(const SmoothDensityModel& model, std::int64_t n,
                           std::uint64_t seed);

/// Deterministic models ignore the seed.
WeightVector generate_weights(const WeightModel& model, std::int64_t n, std::uint64_t seed);

WeightVector apply_scaling(const WeightVector& pi, const ScalingMap& map, std::int64_t n);

std::string model_kind(const WeightModel& m);

}  // namespace degreenet
