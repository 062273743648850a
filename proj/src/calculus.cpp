#include "nhmms/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "nhmms/numeric.hpp"
#include "nhmms/parallel.hpp"

namespace nhmms {

namespace {

void require_finite(std::span<const double> v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i]))
      throw std::invalid_argument("function value " + std::to_string(i) + " is not finite");
}

void require_same(const SpaceFunction& a, const SpaceFunction& b) {
  if (a.space_id() != b.space_id() || a.size() != b.size())
    throw BindingError("functions are bound to different spaces");
}

}  // namespace

SpaceFunction::SpaceFunction(const MetricMeasureSpace& space, std::vector<double> values)
    : space_id_(space.id()), values_(std::move(values)) {
  if (values_.size() != space.size())
    throw BindingError("function has " + std::to_string(values_.size()) + " values, space has " +
                       std::to_string(space.size()) + " atoms");
  require_finite(values_);
}

SpaceFunction::SpaceFunction(std::string space_id, std::vector<double> values)
    : space_id_(std::move(space_id)), values_(std::move(values)) {
  require_finite(values_);
}

SpaceFunction SpaceFunction::zeros(const MetricMeasureSpace& space) {
  return {space, std::vector<double>(space.size(), 0.0)};
}

SpaceFunction SpaceFunction::constant(const MetricMeasureSpace& space, double c) {
  return {space, std::vector<double>(space.size(), c)};
}

SpaceFunction SpaceFunction::delta(const MetricMeasureSpace& space, Index point) {
  space.check_index(point);
  std::vector<double> v(space.size(), 0.0);
  v[point] = 1.0;
  return {space, std::move(v)};
}

SpaceFunction SpaceFunction::indicator(const MetricMeasureSpace& space, const Ball& ball) {
  space.check_index(ball.center);
  std::vector<double> v(space.size(), 0.0);
  for (Index j = 0; j < space.size(); ++j)
    if (space.contains(ball, j)) v[j] = 1.0;
  return {space, std::move(v)};
}

SpaceFunction SpaceFunction::abs() const {
  SpaceFunction out = *this;
  for (double& v : out.values_) v = std::fabs(v);
  return out;
}

SpaceFunction SpaceFunction::scaled(double c) const {
  SpaceFunction out = *this;
  for (double& v : out.values_) v *= c;
  return out;
}

SpaceFunction SpaceFunction::shifted(double c) const {
  SpaceFunction out = *this;
  for (double& v : out.values_) v += c;
  return out;
}

SpaceFunction operator+(const SpaceFunction& a, const SpaceFunction& b) {
  require_same(a, b);
  SpaceFunction out = a;
  for (std::size_t i = 0; i < out.values_.size(); ++i) out.values_[i] += b.values_[i];
  return out;
}

SpaceFunction operator-(const SpaceFunction& a, const SpaceFunction& b) {
  require_same(a, b);
  SpaceFunction out = a;
  for (std::size_t i = 0; i < out.values_.size(); ++i) out.values_[i] -= b.values_[i];
  return out;
}

SpaceFunction operator*(const SpaceFunction& a, const SpaceFunction& b) {
  require_same(a, b);
  SpaceFunction out = a;
  for (std::size_t i = 0; i < out.values_.size(); ++i) out.values_[i] *= b.values_[i];
  return out;
}

void require_bound(const MetricMeasureSpace& space, const SpaceFunction& f) {
  if (f.space_id() != space.id() || f.size() != space.size())
    throw BindingError("function is bound to space " + f.space_id() + ", not " + space.id());
}

double lp_norm(const MetricMeasureSpace& space, const SpaceFunction& f, double p) {
  require_bound(space, f);
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm requires p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::fabs(v));
    return m;
  }
  CompensatedSum acc;
  for (Index i = 0; i < space.size(); ++i) acc.add(std::pow(std::fabs(f[i]), p) * space.mass(i));
  return std::pow(acc.value(), 1.0 / p);
}

double ball_mean(const MetricMeasureSpace& space, const SpaceFunction& f, const Ball& ball) {
  require_bound(space, f);
  const auto members = ball_members(space, ball);
  const double ref = f[ball.center];
  CompensatedSum num;
  double den = 0.0;
  for (Index j : members) {
    num.add((f[j] - ref) * space.mass(j));
    den += space.mass(j);
  }
  return ref + num.value() / den;
}

double integral(const MetricMeasureSpace& space, const SpaceFunction& f) {
  require_bound(space, f);
  CompensatedSum acc;
  for (Index i = 0; i < space.size(); ++i) acc.add(f[i] * space.mass(i));
  return acc.value();
}

SpaceFunction mean_centered(const MetricMeasureSpace& space, const SpaceFunction& f) {
  return f.shifted(-integral(space, f) / space.total_mass());
}

std::vector<double> oscillation_profile(const BallCatalog& catalog, const SpaceFunction& b,
                                        double rho, double p) {
  const MetricMeasureSpace& space = catalog.space();
  require_bound(space, b);
  if (!(rho > 1.0)) throw std::invalid_argument("rho must exceed 1");
  if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
  const PrefixMeans means(space, b.values());
  const auto& balls = catalog.balls();
  std::vector<double> out(balls.size(), 0.0);
  parallel_for(balls.size(), [&](std::size_t i) {
    const CatalogBall& cb = balls[i];
    const Index c = cb.ball.center;
    const double m_tilde = means.mean(c, cb.tilde_count);
    CompensatedSum acc;
    for (Index j : space.order(c).first(cb.count))
      acc.add(std::pow(std::fabs(b[j] - m_tilde), p) * space.mass(j));
    const double dilated = measure(space, cb.ball.dilated(rho));
    out[i] = std::pow(acc.value() / dilated, 1.0 / p);
  });
  return out;
}

RbmoParts rbmo_parts(const BallCatalog& catalog, const SpaceFunction& b, double rho, double p) {
  RbmoParts parts;
  const auto osc = oscillation_profile(catalog, b, rho, p);
  for (double v : osc) parts.oscillation = std::max(parts.oscillation, v);

  const MetricMeasureSpace& space = catalog.space();
  const PrefixMeans means(space, b.values());
  const auto K = catalog.pair_coefficients(0.0);
  const auto& pairs = catalog.pairs();
  const auto& balls = catalog.balls();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& pr = pairs[i];
    const CatalogBall& inner = balls[pr.inner];
    const double diff = std::fabs(means.mean(inner.ball.center, inner.count) -
                                  means.mean(pr.outer_center, pr.outer_count));
    parts.pairs = std::max(parts.pairs, diff / K[i]);
  }
  return parts;
}

double rbmo_norm(const BallCatalog& catalog, const SpaceFunction& b, double rho, double p) {
  return rbmo_parts(catalog, b, rho, p).norm();
}

double rbmo_norm(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                 const SpaceFunction& b, double rho, double p, std::optional<double> beta0) {
  const BallCatalog catalog = beta0 ? BallCatalog(space, lambda, *beta0) : BallCatalog(space, lambda);
  return rbmo_norm(catalog, b, rho, p);
}

}  // namespace nhmms
