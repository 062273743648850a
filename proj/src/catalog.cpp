#include "nhmms/catalog.hpp"

#include <algorithm>
#include <cmath>

#include "nhmms/numeric.hpp"
#include "nhmms/parallel.hpp"

namespace nhmms {

BallCatalog::BallCatalog(const MetricMeasureSpace& space, DominatingFunction lambda)
    : BallCatalog(space, lambda, default_beta0(space, lambda)) {}

BallCatalog::BallCatalog(const MetricMeasureSpace& space, DominatingFunction lambda, double beta0)
    : space_(&space), lambda_(std::move(lambda)), beta0_(beta0) {
  if (!(beta0 >= 1.0)) throw std::invalid_argument("beta0 must be >= 1");
  const auto candidates = candidate_balls(space);
  balls_.resize(candidates.size());
  parallel_for(candidates.size(), [&](std::size_t i) {
    CatalogBall& cb = balls_[i];
    cb.ball = candidates[i];
    cb.count = space.member_count(cb.ball);
    cb.measure = space.prefix_mass(cb.ball.center, cb.count);
    cb.doubling = is_doubling(space, cb.ball, beta0_);
    const auto tilde = smallest_doubling_dilate(space, cb.ball, beta0_);
    cb.tilde_k = tilde.k;
    cb.tilde_count = space.member_count(tilde.ball);
    cb.tilde_measure = space.prefix_mass(cb.ball.center, cb.tilde_count);
  });

  density_offset_.resize(balls_.size() + 1, 0);
  const double diam = space.diameter();
  for (std::size_t i = 0; i < balls_.size(); ++i) {
    const int steps = balls_[i].doubling ? dilation_steps(balls_[i].ball.radius, diam) : 0;
    density_offset_[i + 1] = density_offset_[i] + static_cast<std::size_t>(steps);
  }
  density_.resize(density_offset_.back());
  parallel_for(balls_.size(), [&](std::size_t i) {
    const std::size_t len = density_offset_[i + 1] - density_offset_[i];
    const Index c = balls_[i].ball.center;
    double r = balls_[i].ball.radius;
    for (std::size_t k = 0; k < len; ++k) {
      r *= 6.0;
      density_[density_offset_[i] + k] = measure(space, Ball{c, r}) / lambda_(c, r);
    }
  });
  build_pairs();
}

void BallCatalog::build_pairs() {
  const MetricMeasureSpace& space = *space_;
  const std::size_t n = space.size();
  const auto radii = space.admissible_radii();
  auto first_radius_covering = [&](std::size_t from, double need) {
    auto it = std::partition_point(radii.begin() + static_cast<std::ptrdiff_t>(from), radii.end(),
                                   [need](double r) { return !MetricMeasureSpace::within(need, r); });
    return static_cast<std::size_t>(it - radii.begin());
  };

  std::vector<std::vector<DoublingPair>> per_ball(balls_.size());
  parallel_for(balls_.size(), [&](std::size_t i) {
    const CatalogBall& inner = balls_[i];
    if (!inner.doubling) return;
    const auto members = space.order(inner.ball.center).first(inner.count);
    auto& out = per_ball[i];
    for (Index oc = 0; oc < n; ++oc) {
      double need = inner.ball.radius;
      for (Index j : members) need = std::max(need, space.distance(oc, j));
      std::size_t ri = first_radius_covering(0, need);
      while (ri < radii.size()) {
        const double r = radii[ri];
        const std::size_t level = space.member_count(oc, r);
        const double mq = space.prefix_mass(oc, level);
        if (measure(space, Ball{oc, 6.0 * r}) <= beta0_ * mq) {
          out.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(oc),
                         static_cast<std::uint32_t>(level),
                         static_cast<std::uint32_t>(dilation_steps(inner.ball.radius, r))});
        }
        if (level == n) break;
        ri = first_radius_covering(ri + 1, space.sorted_distance(oc, level));
      }
    }
  });
  std::size_t total = 0;
  for (const auto& v : per_ball) total += v.size();
  pairs_.reserve(total);
  for (auto& v : per_ball) pairs_.insert(pairs_.end(), v.begin(), v.end());
}

std::vector<double> BallCatalog::pair_coefficients(double gamma) const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0,1)");
  // Cumulative K per ball and step count, then a lookup per pair.
  std::vector<double> cumulative(density_.size() + balls_.size());
  for (std::size_t i = 0; i < balls_.size(); ++i) {
    const std::size_t base = density_offset_[i] + i;
    cumulative[base] = 1.0;
    const std::size_t len = density_offset_[i + 1] - density_offset_[i];
    for (std::size_t k = 0; k < len; ++k)
      cumulative[base + k + 1] =
          cumulative[base + k] + std::pow(density_[density_offset_[i] + k], 1.0 - gamma);
  }
  std::vector<double> out(pairs_.size());
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    const auto& pr = pairs_[p];
    out[p] = cumulative[density_offset_[pr.inner] + pr.inner + pr.steps];
  }
  return out;
}

PrefixMeans::PrefixMeans(const MetricMeasureSpace& space, std::span<const double> values)
    : space_(&space), n_(space.size()), ref_(values.begin(), values.end()), sums_(n_ * (n_ + 1), 0.0) {
  for (Index c = 0; c < n_; ++c) {
    const auto ord = space.order(c);
    CompensatedSum acc;
    for (std::size_t k = 0; k < n_; ++k) {
      acc.add((values[ord[k]] - ref_[c]) * space.mass(ord[k]));
      sums_[c * (n_ + 1) + k + 1] = acc.value();
    }
  }
}

}  // namespace nhmms
