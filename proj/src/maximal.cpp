#include "nhmms/maximal.hpp"

#include <algorithm>
#include <cmath>

#include "nhmms/numeric.hpp"
#include "nhmms/parallel.hpp"

namespace nhmms {

namespace {

/// out[x] = max over balls containing x of value[ball].
void spread_to_members(const MetricMeasureSpace& space, const std::vector<CatalogBall>& balls,
                       const std::vector<double>& value, std::vector<double>& out) {
  for (std::size_t i = 0; i < balls.size(); ++i) {
    const auto members = space.order(balls[i].ball.center).first(balls[i].count);
    for (Index x : members) out[x] = std::max(out[x], value[i]);
  }
}

}  // namespace

SpaceFunction sharp_maximal(const BallCatalog& catalog, const SpaceFunction& f, double beta) {
  const MetricMeasureSpace& space = catalog.space();
  require_bound(space, f);
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in [0,1)");
  const auto& balls = catalog.balls();
  const std::size_t n = space.size();

  std::vector<double> osc_term(n, 0.0);
  spread_to_members(space, balls, oscillation_profile(catalog, f, 6.0, 1.0), osc_term);

  const PrefixMeans means(space, f.values());
  const auto K = catalog.pair_coefficients(beta);
  const auto& pairs = catalog.pairs();
  std::vector<double> best(balls.size(), 0.0);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& pr = pairs[p];
    const CatalogBall& inner = balls[pr.inner];
    const double diff = std::fabs(means.mean(inner.ball.center, inner.count) -
                                  means.mean(pr.outer_center, pr.outer_count));
    best[pr.inner] = std::max(best[pr.inner], diff / K[p]);
  }
  std::vector<double> pair_term(n, 0.0);
  spread_to_members(space, balls, best, pair_term);

  std::vector<double> out(n);
  for (Index x = 0; x < n; ++x) out[x] = osc_term[x] + pair_term[x];
  return {space, std::move(out)};
}

SpaceFunction sharp_maximal(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                            const SpaceFunction& f, double beta, std::optional<double> beta0) {
  const BallCatalog catalog =
      beta0 ? BallCatalog(space, lambda, *beta0) : BallCatalog(space, lambda);
  return sharp_maximal(catalog, f, beta);
}

SpaceFunction doubling_maximal(const MetricMeasureSpace& space, const SpaceFunction& f,
                               double beta0) {
  require_bound(space, f);
  if (!(beta0 >= 1.0)) throw std::invalid_argument("beta0 must be >= 1");
  const std::size_t n = space.size();
  std::vector<double> out(n, 0.0);
  if (n == 1) {
    out[0] = std::fabs(f[0]);
    return {space, std::move(out)};
  }
  const auto af = f.abs();
  const PrefixMeans means(space, af.values());

  std::vector<Ball> balls = candidate_balls(space);
  std::vector<char> doubling(balls.size());
  parallel_for(balls.size(), [&](std::size_t i) { doubling[i] = is_doubling(space, balls[i], beta0); });
  // Balls small enough to hold only their center are doubling.
  for (Index x = 0; x < n; ++x) out[x] = af[x];
  for (std::size_t i = 0; i < balls.size(); ++i) {
    if (!doubling[i]) continue;
    const std::size_t count = space.member_count(balls[i]);
    const double avg = means.mean(balls[i].center, count);
    for (Index x : space.order(balls[i].center).first(count)) out[x] = std::max(out[x], avg);
  }
  return {space, std::move(out)};
}

SpaceFunction fractional_maximal(const MetricMeasureSpace& space, const SpaceFunction& f,
                                 double r, double rho, double alpha) {
  require_bound(space, f);
  if (!(r >= 1.0)) throw std::invalid_argument("fractional_maximal requires r >= 1");
  if (!(rho > 1.0)) throw std::invalid_argument("fractional_maximal requires rho > 1");
  if (!(alpha >= 0.0 && alpha * r < 1.0))
    throw std::invalid_argument("fractional_maximal requires 0 <= alpha and alpha * r < 1");
  const std::size_t n = space.size();
  std::vector<double> powered(n);
  for (Index i = 0; i < n; ++i) powered[i] = std::pow(std::fabs(f[i]), r);
  const PrefixMeans sums(space, powered);

  const auto balls = candidate_balls(space);
  std::vector<double> value(balls.size());
  std::vector<std::size_t> count(balls.size());
  const double expo = 1.0 - alpha * r;
  parallel_for(balls.size(), [&](std::size_t i) {
    count[i] = space.member_count(balls[i]);
    const double dil = measure(space, balls[i].dilated(rho));
    value[i] = std::pow(sums.integral(balls[i].center, count[i]) / std::pow(dil, expo), 1.0 / r);
  });
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < balls.size(); ++i)
    for (Index x : space.order(balls[i].center).first(count[i])) out[x] = std::max(out[x], value[i]);
  return {space, std::move(out)};
}

}  // namespace nhmms
