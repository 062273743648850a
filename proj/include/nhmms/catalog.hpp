#pragma once

#include <cstdint>
#include <vector>

#include "nhmms/space.hpp"

namespace nhmms {

/// A candidate ball with everything the oscillation and maximal
/// computations need precomputed. Members are the first `count` atoms of
/// `space.order(ball.center)`.
struct CatalogBall {
  Ball ball;
  std::size_t count = 0;
  double measure = 0.0;
  bool doubling = false;
  std::size_t tilde_count = 0;  // members of the smallest doubling dilate
  double tilde_measure = 0.0;
  int tilde_k = 0;
};

/// Doubling pair B subset Q. Q is identified by its center and member
/// count; its radius is the smallest admissible radius realizing that
/// member set while containing B, which minimizes K_{B,Q} over every
/// doubling candidate Q with the same members.
struct DoublingPair {
  std::uint32_t inner = 0;  // index into BallCatalog::balls()
  std::uint32_t outer_center = 0;
  std::uint32_t outer_count = 0;
  std::uint32_t steps = 0;  // N_{B,Q}
};

/// Candidate balls of a space, their doubling dilates and the complete
/// set of doubling containment pairs, for a fixed lambda and beta0.
///
/// The space must outlive the catalog.
class BallCatalog {
 public:
  BallCatalog(const MetricMeasureSpace& space, DominatingFunction lambda, double beta0);

  /// Uses default_beta0.
  BallCatalog(const MetricMeasureSpace& space, DominatingFunction lambda);

  [[nodiscard]] const MetricMeasureSpace& space() const { return *space_; }
  [[nodiscard]] const DominatingFunction& lambda() const { return lambda_; }
  [[nodiscard]] double beta0() const { return beta0_; }
  [[nodiscard]] const std::vector<CatalogBall>& balls() const { return balls_; }
  [[nodiscard]] const std::vector<DoublingPair>& pairs() const { return pairs_; }

  /// K^(gamma)_{B,Q} for every pair, aligned with pairs().
  [[nodiscard]] std::vector<double> pair_coefficients(double gamma) const;

 private:
  void build_pairs();

  const MetricMeasureSpace* space_;
  DominatingFunction lambda_;
  double beta0_;
  std::vector<CatalogBall> balls_;
  std::vector<DoublingPair> pairs_;
  // density_[offset_[i] + k - 1] = mu(6^k B_i) / lambda(x_B, 6^k r_B)
  std::vector<double> density_;
  std::vector<std::size_t> density_offset_;
};

/// Prefix sums of (f - f(center)) * mass along each center's distance
/// order, giving O(1) means of any ball (center, member count). Offsetting
/// by the center value makes means of constants and singletons exact.
class PrefixMeans {
 public:
  PrefixMeans(const MetricMeasureSpace& space, std::span<const double> values);

  [[nodiscard]] double integral(Index center, std::size_t count) const {
    return ref_[center] * space_->prefix_mass(center, count) + sums_[center * (n_ + 1) + count];
  }
  [[nodiscard]] double mean(Index center, std::size_t count) const {
    return ref_[center] + sums_[center * (n_ + 1) + count] / space_->prefix_mass(center, count);
  }

 private:
  const MetricMeasureSpace* space_;
  std::size_t n_;
  std::vector<double> ref_;
  std::vector<double> sums_;
};

}  // namespace nhmms
