#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nhmms {

using Index = std::size_t;

/// Relative slack used for every "d(x, y) <= r" comparison, so that
/// 6^k dilates of admissible radii capture atoms sitting exactly on the
/// boundary despite rounding in the multiplication.
inline constexpr double kRadiusSlack = 1e-12;

/// Raised when a space violates one of its structural invariants.
class SpaceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a function or operand is bound to a different space, or
/// an arity does not match.
class BindingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closed ball {y : d(center, y) <= radius}.
struct Ball {
  Index center = 0;
  double radius = 0.0;

  [[nodiscard]] Ball dilated(double factor) const { return {center, radius * factor}; }
  friend bool operator==(const Ball&, const Ball&) = default;
};

/// Finite metric measure space with atomic masses.
///
/// Distances are stored densely; for every center the other atoms are
/// kept sorted by distance together with prefix sums of their masses, so
/// that a ball's member set is always a prefix of its center's order and
/// its measure is a binary search away.
class MetricMeasureSpace {
 public:
  /// `dist` is row-major n x n. Throws SpaceError naming the first
  /// violating entry or triple. The O(n^3) triangle scan may be skipped
  /// only for tables that are metric by construction (Euclidean).
  MetricMeasureSpace(std::vector<double> dist, std::vector<double> mass,
                     std::vector<std::vector<double>> coords = {}, bool verify_triangle = true);

  /// Euclidean distances between the given coordinates.
  static MetricMeasureSpace from_points(std::vector<std::vector<double>> coords,
                                        std::vector<double> mass);

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] double distance(Index i, Index j) const { return dist_[i * n_ + j]; }
  [[nodiscard]] double mass(Index i) const { return mass_[i]; }
  [[nodiscard]] std::span<const double> masses() const { return mass_; }
  [[nodiscard]] std::span<const double> distance_table() const { return dist_; }
  [[nodiscard]] const std::vector<std::vector<double>>& coords() const { return coords_; }
  [[nodiscard]] std::span<const double> admissible_radii() const { return radii_; }
  [[nodiscard]] double total_mass() const { return total_mass_; }
  [[nodiscard]] double diameter() const { return radii_.empty() ? 0.0 : radii_.back(); }
  [[nodiscard]] double nearest_neighbour_distance(Index x) const;

  /// Content hash of distances and masses (16 hex digits).
  [[nodiscard]] const std::string& id() const { return id_; }

  /// Atoms ordered by distance from `center` (center first).
  [[nodiscard]] std::span<const Index> order(Index center) const {
    return {order_.data() + center * n_, n_};
  }
  /// Distance of the k-th atom in `order(center)`.
  [[nodiscard]] double sorted_distance(Index center, std::size_t k) const {
    return sorted_dist_[center * n_ + k];
  }
  /// Mass of the first `count` atoms in `order(center)`.
  [[nodiscard]] double prefix_mass(Index center, std::size_t count) const {
    return prefix_mass_[center * (n_ + 1) + count];
  }

  /// Number of atoms within closed distance `radius` of `center`.
  [[nodiscard]] std::size_t member_count(Index center, double radius) const;
  [[nodiscard]] std::size_t member_count(const Ball& b) const {
    return member_count(b.center, b.radius);
  }
  [[nodiscard]] bool contains(const Ball& b, Index j) const {
    return within(distance(b.center, j), b.radius);
  }

  void check_index(Index i) const;

  static bool within(double d, double radius) { return d <= radius * (1.0 + kRadiusSlack); }

 private:
  std::size_t n_ = 0;
  std::vector<double> dist_;
  std::vector<double> mass_;
  std::vector<std::vector<double>> coords_;
  std::vector<double> radii_;
  std::vector<Index> order_;
  std::vector<double> sorted_dist_;
  std::vector<double> prefix_mass_;
  double total_mass_ = 0.0;
  std::string id_;
};

enum class LambdaFamily { power, floored_power, per_point_power, two_power };

std::string to_string(LambdaFamily f);
LambdaFamily lambda_family_from_string(const std::string& s);

/// Declared constants of a dominating function. They are claims checked
/// by check_upper_doubling, never assumed.
struct LambdaConstants {
  double m = 1.0;         // lower scaling: lambda(x, a r) >= a^m lambda(x, r)
  double C_lambda = 2.0;  // lambda(x, r) <= C_lambda lambda(x, r / 2)
  double C_tilde = 1.0;   // lambda(x, r) <= C_tilde lambda(y, r) for d(x, y) <= r
};

/// Parametric lambda(x, r):
///   power            C r^k
///   floored_power    max(C r^k, mass_x)
///   per_point_power  C_x r^k
///   two_power        C max(r^k, r^k2)
class DominatingFunction {
 public:
  static DominatingFunction power(double C, double k);
  static DominatingFunction floored_power(double C, double k, std::vector<double> floors);
  static DominatingFunction per_point_power(std::vector<double> scales, double k);
  static DominatingFunction two_power(double C, double k, double k2);

  /// Evaluates at r >= 0; r = 0 is the continuous limit.
  [[nodiscard]] double operator()(Index x, double r) const;

  /// r -> r^k part without the scale, used by the generators.
  [[nodiscard]] double shape(double r) const;

  [[nodiscard]] LambdaFamily family() const { return family_; }
  [[nodiscard]] double C() const { return C_; }
  [[nodiscard]] double k() const { return k_; }
  [[nodiscard]] double k2() const { return k2_; }
  [[nodiscard]] const std::vector<double>& per_point() const { return per_point_; }

  [[nodiscard]] const LambdaConstants& declared() const { return declared_; }
  DominatingFunction& with_declared(LambdaConstants c) {
    declared_ = c;
    return *this;
  }

 private:
  DominatingFunction() = default;
  LambdaFamily family_ = LambdaFamily::power;
  double C_ = 1.0;
  double k_ = 1.0;
  double k2_ = 1.0;
  std::vector<double> per_point_;  // floors or per-point scales
  LambdaConstants declared_;
};

// ---- ball machinery -------------------------------------------------------

std::vector<Index> ball_members(const MetricMeasureSpace& space, const Ball& ball);
double measure(const MetricMeasureSpace& space, std::span<const Index> points);
double measure(const MetricMeasureSpace& space, const Ball& ball);

/// Every (center, r) with r an admissible radius, center-major.
std::vector<Ball> candidate_balls(const MetricMeasureSpace& space);

/// mu(6B) <= beta0 mu(B).
bool is_doubling(const MetricMeasureSpace& space, const Ball& ball, double beta0);

struct DoublingDilate {
  Ball ball;
  int k = 0;
};

/// Least k >= 0 such that 6^k B is (6, beta0)-doubling.
DoublingDilate smallest_doubling_dilate(const MetricMeasureSpace& space, const Ball& ball,
                                        double beta0);

/// Smallest N with 6^N r_B >= r_Q.
int dilation_steps(double r_inner, double r_outer);

/// 1 + sum_{k=1}^{N} [mu(6^k B) / lambda(x_B, 6^k r_B)]^(1 - gamma).
/// Requires members(B) subset of members(Q) and r_B <= r_Q.
double k_coefficient(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                     const Ball& B, const Ball& Q, double gamma);

/// Greedy farthest-point cover of members(ball) by radius/2 balls
/// centered at members, seeded with the ball's own center.
std::size_t covering_number(const MetricMeasureSpace& space, const Ball& ball);

/// Largest greedy covering number over all candidate balls.
std::size_t max_covering_number(const MetricMeasureSpace& space);

/// 2 max{C_lambda^(3 log2 6), 6^n}, n = log2 N0, with C_lambda the
/// declared constant and N0 the greedy covering estimate.
double default_beta0(const MetricMeasureSpace& space, const DominatingFunction& lambda);

struct DoublingReport {
  double measured_C0 = 0.0;
  double measured_C_lambda = 0.0;
  double measured_C_tilde = 0.0;
  double measured_m = 0.0;
  double weak_growth_epsilon = 0.5;
  double weak_growth_constant = 0.0;
  std::size_t weak_growth_samples = 0;
  std::size_t covering_N0 = 1;
  double dimension_n = 0.0;
  double beta0 = 0.0;

  bool upper_doubling = false;
  bool lambda_doubling = false;
  bool comparability = false;
  bool lower_scaling = false;
  bool monotone = false;

  [[nodiscard]] bool pass() const {
    return upper_doubling && lambda_doubling && comparability && lower_scaling && monotone;
  }
};

struct DoublingCheckOptions {
  double epsilon = 0.5;
  std::optional<double> beta0;
  std::size_t weak_growth_samples = 10000;
  std::uint64_t seed = 1;
};

DoublingReport check_upper_doubling(const MetricMeasureSpace& space,
                                    const DominatingFunction& lambda,
                                    const DoublingCheckOptions& options = {});

}  // namespace nhmms
