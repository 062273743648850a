#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nhmms/catalog.hpp"
#include "nhmms/space.hpp"

namespace nhmms {

/// Real-valued function on the atoms of a space, tagged with the space id.
class SpaceFunction {
 public:
  SpaceFunction(const MetricMeasureSpace& space, std::vector<double> values);
  /// For loaders that carry only the id; values are still checked finite.
  SpaceFunction(std::string space_id, std::vector<double> values);

  static SpaceFunction zeros(const MetricMeasureSpace& space);
  static SpaceFunction constant(const MetricMeasureSpace& space, double c);
  /// 1 at `point`, 0 elsewhere.
  static SpaceFunction delta(const MetricMeasureSpace& space, Index point);
  static SpaceFunction indicator(const MetricMeasureSpace& space, const Ball& ball);

  [[nodiscard]] const std::string& space_id() const { return space_id_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double operator[](Index i) const { return values_[i]; }

  [[nodiscard]] SpaceFunction abs() const;
  [[nodiscard]] SpaceFunction scaled(double c) const;
  [[nodiscard]] SpaceFunction shifted(double c) const;

  friend SpaceFunction operator+(const SpaceFunction& a, const SpaceFunction& b);
  friend SpaceFunction operator-(const SpaceFunction& a, const SpaceFunction& b);
  /// Pointwise product.
  friend SpaceFunction operator*(const SpaceFunction& a, const SpaceFunction& b);

 private:
  std::string space_id_;
  std::vector<double> values_;
};

/// Throws BindingError unless f was built on this space.
void require_bound(const MetricMeasureSpace& space, const SpaceFunction& f);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (sum_i |f_i|^p mass_i)^(1/p); p = kInfinity gives max_i |f_i|.
double lp_norm(const MetricMeasureSpace& space, const SpaceFunction& f, double p);

double ball_mean(const MetricMeasureSpace& space, const SpaceFunction& f, const Ball& ball);

/// Integral of f against mu, and f minus its mu-mean.
double integral(const MetricMeasureSpace& space, const SpaceFunction& f);
SpaceFunction mean_centered(const MetricMeasureSpace& space, const SpaceFunction& f);

struct RbmoParts {
  double oscillation = 0.0;  // sup_B {mu(rho B)^-1 int_B |b - m_Btilde b|^p}^(1/p)
  double pairs = 0.0;        // sup_{doubling B in Q} |m_B b - m_Q b| / K_{B,Q}
  [[nodiscard]] double norm() const { return oscillation > pairs ? oscillation : pairs; }
};

RbmoParts rbmo_parts(const BallCatalog& catalog, const SpaceFunction& b, double rho = 6.0,
                     double p = 1.0);

double rbmo_norm(const BallCatalog& catalog, const SpaceFunction& b, double rho = 6.0,
                 double p = 1.0);

/// Builds a catalog with the given beta0 (default_beta0 when empty).
double rbmo_norm(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                 const SpaceFunction& b, double rho = 6.0, double p = 1.0,
                 std::optional<double> beta0 = std::nullopt);

/// Per-candidate-ball oscillation term, aligned with catalog.balls().
std::vector<double> oscillation_profile(const BallCatalog& catalog, const SpaceFunction& b,
                                        double rho, double p);

}  // namespace nhmms
