#include "nhmms/space.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "nhmms/numeric.hpp"
#include "nhmms/parallel.hpp"

namespace nhmms {

namespace {

std::string fnv1a_hex(std::span<const double> a, std::span<const double> b, std::uint64_t n) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  feed(&n, sizeof n);
  feed(a.data(), a.size_bytes());
  feed(b.data(), b.size_bytes());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<double> euclidean_table(const std::vector<std::vector<double>>& coords) {
  const std::size_t n = coords.size();
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (coords[i].size() != coords[0].size())
      throw SpaceError("points: row " + std::to_string(i) + " has dimension " +
                       std::to_string(coords[i].size()) + ", expected " +
                       std::to_string(coords[0].size()));
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < coords[i].size(); ++c) {
        const double diff = coords[i][c] - coords[j][c];
        s += diff * diff;
      }
      dist[i * n + j] = dist[j * n + i] = std::sqrt(s);
    }
  }
  return dist;
}

}  // namespace

MetricMeasureSpace::MetricMeasureSpace(std::vector<double> dist, std::vector<double> mass,
                                       std::vector<std::vector<double>> coords,
                                       bool verify_triangle)
    : n_(mass.size()), dist_(std::move(dist)), mass_(std::move(mass)), coords_(std::move(coords)) {
  if (n_ == 0) throw SpaceError("space must contain at least one atom");
  if (dist_.size() != n_ * n_)
    throw SpaceError("distance table has " + std::to_string(dist_.size()) +
                     " entries, expected " + std::to_string(n_ * n_));
  if (!coords_.empty() && coords_.size() != n_)
    throw SpaceError("coordinate table has " + std::to_string(coords_.size()) +
                     " rows, expected " + std::to_string(n_));

  for (std::size_t i = 0; i < n_; ++i) {
    if (!(std::isfinite(mass_[i]) && mass_[i] > 0.0))
      throw SpaceError("mass[" + std::to_string(i) + "] must be positive and finite");
  }
  double dmax = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (distance(i, i) != 0.0)
      throw SpaceError("dist[" + std::to_string(i) + "][" + std::to_string(i) + "] must be 0");
    for (std::size_t j = 0; j < n_; ++j) {
      const double d = distance(i, j);
      if (!std::isfinite(d)) throw SpaceError("non-finite distance at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      if (i != j && !(d > 0.0))
        throw SpaceError("atoms " + std::to_string(i) + " and " + std::to_string(j) +
                         " coincide (distance must be positive)");
      if (d != distance(j, i))
        throw SpaceError("distance table not symmetric at (" + std::to_string(i) + "," +
                         std::to_string(j) + ")");
      dmax = std::max(dmax, d);
    }
  }
  // Triangle inequality with a rounding allowance relative to the diameter.
  const double tol = 1e-12 * dmax;
  for (std::size_t i = 0; verify_triangle && i < n_; ++i)
    for (std::size_t k = 0; k < n_; ++k) {
      const double dik = distance(i, k);
      for (std::size_t j = i + 1; j < n_; ++j) {
        if (distance(i, j) > dik + distance(k, j) + tol) {
          std::ostringstream msg;
          msg.precision(17);
          msg << "triangle inequality violated for triple (i=" << i << ", j=" << j
              << ", k=" << k << "): d(i,j)=" << distance(i, j) << " > d(i,k)+d(k,j)="
              << dik + distance(k, j);
          throw SpaceError(msg.str());
        }
      }
    }

  radii_.reserve(n_ * (n_ - 1) / 2);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) radii_.push_back(distance(i, j));
  std::sort(radii_.begin(), radii_.end());
  radii_.erase(std::unique(radii_.begin(), radii_.end()), radii_.end());

  order_.resize(n_ * n_);
  sorted_dist_.resize(n_ * n_);
  prefix_mass_.resize(n_ * (n_ + 1));
  for (std::size_t c = 0; c < n_; ++c) {
    auto row = std::span<Index>(order_.data() + c * n_, n_);
    std::iota(row.begin(), row.end(), Index{0});
    std::sort(row.begin(), row.end(), [&](Index a, Index b) {
      const double da = distance(c, a), db = distance(c, b);
      return da != db ? da < db : a < b;
    });
    double acc = 0.0;
    prefix_mass_[c * (n_ + 1)] = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
      sorted_dist_[c * n_ + k] = distance(c, row[k]);
      acc += mass_[row[k]];
      prefix_mass_[c * (n_ + 1) + k + 1] = acc;
    }
  }
  total_mass_ = std::accumulate(mass_.begin(), mass_.end(), 0.0);
  id_ = fnv1a_hex(dist_, mass_, n_);
}

MetricMeasureSpace MetricMeasureSpace::from_points(std::vector<std::vector<double>> coords,
                                                   std::vector<double> mass) {
  if (coords.size() != mass.size())
    throw SpaceError("points and masses differ in length (" + std::to_string(coords.size()) +
                     " vs " + std::to_string(mass.size()) + ")");
  auto dist = euclidean_table(coords);
  return MetricMeasureSpace(std::move(dist), std::move(mass), std::move(coords), false);
}

double MetricMeasureSpace::nearest_neighbour_distance(Index x) const {
  check_index(x);
  return n_ < 2 ? std::numeric_limits<double>::infinity() : sorted_distance(x, 1);
}

std::size_t MetricMeasureSpace::member_count(Index center, double radius) const {
  const double* row = sorted_dist_.data() + center * n_;
  const double bound = radius * (1.0 + kRadiusSlack);
  return static_cast<std::size_t>(std::upper_bound(row, row + n_, bound) - row);
}

void MetricMeasureSpace::check_index(Index i) const {
  if (i >= n_)
    throw std::out_of_range("point index " + std::to_string(i) + " out of range [0," +
                            std::to_string(n_) + ")");
}

// ---- dominating functions -------------------------------------------------

std::string to_string(LambdaFamily f) {
  switch (f) {
    case LambdaFamily::power: return "power";
    case LambdaFamily::floored_power: return "floored_power";
    case LambdaFamily::per_point_power: return "per_point_power";
    case LambdaFamily::two_power: return "two_power";
  }
  return "?";
}

LambdaFamily lambda_family_from_string(const std::string& s) {
  if (s == "power") return LambdaFamily::power;
  if (s == "floored_power") return LambdaFamily::floored_power;
  if (s == "per_point_power") return LambdaFamily::per_point_power;
  if (s == "two_power") return LambdaFamily::two_power;
  throw std::invalid_argument("unknown lambda family '" + s + "'");
}

namespace {
void require_scale(double C, double k) {
  if (!(std::isfinite(C) && C > 0.0)) throw std::invalid_argument("lambda scale C must be positive");
  if (!(std::isfinite(k) && k >= 0.0)) throw std::invalid_argument("lambda exponent k must be >= 0");
}
}  // namespace

DominatingFunction DominatingFunction::power(double C, double k) {
  require_scale(C, k);
  DominatingFunction f;
  f.family_ = LambdaFamily::power;
  f.C_ = C;
  f.k_ = k;
  f.declared_ = {k, std::pow(2.0, k), 1.0};
  return f;
}

DominatingFunction DominatingFunction::floored_power(double C, double k, std::vector<double> floors) {
  require_scale(C, k);
  if (floors.empty()) throw std::invalid_argument("floored_power needs per-atom floors");
  DominatingFunction f;
  f.family_ = LambdaFamily::floored_power;
  f.C_ = C;
  f.k_ = k;
  const auto [lo, hi] = std::minmax_element(floors.begin(), floors.end());
  f.declared_ = {k, std::pow(2.0, k), *hi / *lo};
  f.per_point_ = std::move(floors);
  return f;
}

DominatingFunction DominatingFunction::per_point_power(std::vector<double> scales, double k) {
  if (scales.empty()) throw std::invalid_argument("per_point_power needs per-atom scales");
  for (double c : scales) require_scale(c, k);
  DominatingFunction f;
  f.family_ = LambdaFamily::per_point_power;
  f.C_ = *std::max_element(scales.begin(), scales.end());
  f.k_ = k;
  const auto [lo, hi] = std::minmax_element(scales.begin(), scales.end());
  f.declared_ = {k, std::pow(2.0, k), *hi / *lo};
  f.per_point_ = std::move(scales);
  return f;
}

DominatingFunction DominatingFunction::two_power(double C, double k, double k2) {
  require_scale(C, k);
  require_scale(C, k2);
  DominatingFunction f;
  f.family_ = LambdaFamily::two_power;
  f.C_ = C;
  f.k_ = k;
  f.k2_ = k2;
  f.declared_ = {std::min(k, k2), std::pow(2.0, std::max(k, k2)), 1.0};
  return f;
}

double DominatingFunction::shape(double r) const {
  if (family_ == LambdaFamily::two_power) return std::max(std::pow(r, k_), std::pow(r, k2_));
  return std::pow(r, k_);
}

double DominatingFunction::operator()(Index x, double r) const {
  switch (family_) {
    case LambdaFamily::power: return C_ * std::pow(r, k_);
    case LambdaFamily::floored_power: return std::max(C_ * std::pow(r, k_), per_point_.at(x));
    case LambdaFamily::per_point_power: return per_point_.at(x) * std::pow(r, k_);
    case LambdaFamily::two_power: return C_ * shape(r);
  }
  return 0.0;
}

// ---- balls ----------------------------------------------------------------

std::vector<Index> ball_members(const MetricMeasureSpace& space, const Ball& ball) {
  space.check_index(ball.center);
  if (!(ball.radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  std::vector<Index> out;
  for (Index j = 0; j < space.size(); ++j)
    if (space.contains(ball, j)) out.push_back(j);
  return out;
}

double measure(const MetricMeasureSpace& space, std::span<const Index> points) {
  double s = 0.0;
  for (Index j : points) {
    space.check_index(j);
    s += space.mass(j);
  }
  return s;
}

double measure(const MetricMeasureSpace& space, const Ball& ball) {
  space.check_index(ball.center);
  return space.prefix_mass(ball.center, space.member_count(ball));
}

std::vector<Ball> candidate_balls(const MetricMeasureSpace& space) {
  std::vector<Ball> out;
  const auto radii = space.admissible_radii();
  out.reserve(space.size() * radii.size());
  for (Index c = 0; c < space.size(); ++c)
    for (double r : radii) out.push_back({c, r});
  return out;
}

bool is_doubling(const MetricMeasureSpace& space, const Ball& ball, double beta0) {
  return measure(space, ball.dilated(6.0)) <= beta0 * measure(space, ball);
}

DoublingDilate smallest_doubling_dilate(const MetricMeasureSpace& space, const Ball& ball,
                                        double beta0) {
  if (!(beta0 >= 1.0)) throw std::invalid_argument("beta0 must be >= 1");
  space.check_index(ball.center);
  DoublingDilate out{ball, 0};
  // Terminates: once the ball covers X, mu(6B) = mu(B) <= beta0 mu(B).
  while (!is_doubling(space, out.ball, beta0)) {
    out.ball.radius *= 6.0;
    ++out.k;
  }
  return out;
}

int dilation_steps(double r_inner, double r_outer) {
  int steps = 0;
  double r = r_inner;
  while (!MetricMeasureSpace::within(r_outer, r)) {
    r *= 6.0;
    ++steps;
  }
  return steps;
}

double k_coefficient(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                     const Ball& B, const Ball& Q, double gamma) {
  space.check_index(B.center);
  space.check_index(Q.center);
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0,1)");
  if (!MetricMeasureSpace::within(B.radius, Q.radius))
    throw std::invalid_argument("k_coefficient requires r_B <= r_Q");
  const std::size_t nb = space.member_count(B);
  for (std::size_t k = 0; k < nb; ++k)
    if (!space.contains(Q, space.order(B.center)[k]))
      throw std::invalid_argument("k_coefficient requires members(B) inside members(Q)");

  const int steps = dilation_steps(B.radius, Q.radius);
  double K = 1.0;
  double r = B.radius;
  for (int k = 1; k <= steps; ++k) {
    r *= 6.0;
    K += std::pow(measure(space, Ball{B.center, r}) / lambda(B.center, r), 1.0 - gamma);
  }
  return K;
}

std::size_t covering_number(const MetricMeasureSpace& space, const Ball& ball) {
  space.check_index(ball.center);
  const std::size_t count = space.member_count(ball);
  const auto members = space.order(ball.center).first(count);
  const double half = ball.radius / 2.0;
  std::vector<double> gap(count);
  for (std::size_t i = 0; i < count; ++i) gap[i] = space.distance(ball.center, members[i]);
  std::size_t chosen = 1;
  for (;;) {
    std::size_t pick = count;
    for (std::size_t i = 0; i < count; ++i) {
      if (MetricMeasureSpace::within(gap[i], half)) continue;
      if (pick == count || gap[i] > gap[pick] ||
          (gap[i] == gap[pick] && members[i] < members[pick]))
        pick = i;
    }
    if (pick == count) return chosen;
    ++chosen;
    const Index c = members[pick];
    for (std::size_t i = 0; i < count; ++i)
      gap[i] = std::min(gap[i], space.distance(c, members[i]));
  }
}

std::size_t max_covering_number(const MetricMeasureSpace& space) {
  const auto balls = candidate_balls(space);
  std::vector<std::size_t> counts(balls.size(), 1);
  parallel_for(balls.size(), [&](std::size_t i) { counts[i] = covering_number(space, balls[i]); });
  return counts.empty() ? 1 : *std::max_element(counts.begin(), counts.end());
}

double default_beta0(const MetricMeasureSpace& space, const DominatingFunction& lambda) {
  const double n = std::log2(static_cast<double>(max_covering_number(space)));
  const double from_lambda = std::pow(lambda.declared().C_lambda, 3.0 * std::log2(6.0));
  return 2.0 * std::max({from_lambda, std::pow(6.0, n), 1.0});
}

// ---- upper doubling report ------------------------------------------------

namespace {

std::vector<double> radius_grid(const MetricMeasureSpace& space) {
  const auto radii = space.admissible_radii();
  std::vector<double> grid;
  constexpr std::size_t kMaxAdmissible = 256;
  if (radii.size() <= kMaxAdmissible) {
    grid.assign(radii.begin(), radii.end());
  } else {
    for (std::size_t i = 0; i < kMaxAdmissible; ++i)
      grid.push_back(radii[i * (radii.size() - 1) / (kMaxAdmissible - 1)]);
  }
  const double lo = (radii.empty() ? 1.0 : radii.front()) / 4.0;
  const double hi = (radii.empty() ? 1.0 : radii.back()) * 4.0;
  constexpr int kLogPoints = 32;
  for (int i = 0; i < kLogPoints; ++i)
    grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (kLogPoints - 1)));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

bool lambda_depends_on_point(const DominatingFunction& lambda) {
  return lambda.family() == LambdaFamily::floored_power ||
         lambda.family() == LambdaFamily::per_point_power;
}

}  // namespace

DoublingReport check_upper_doubling(const MetricMeasureSpace& space,
                                    const DominatingFunction& lambda,
                                    const DoublingCheckOptions& options) {
  if (!(options.epsilon > 0.0 && options.epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0,1)");
  const std::size_t n = space.size();
  const auto radii = space.admissible_radii();
  DoublingReport rep;
  rep.weak_growth_epsilon = options.epsilon;

  // mu(B(x, r)) <= lambda(x, r) over centers x admissible radii.
  std::vector<double> c0(n, 0.0);
  parallel_for(n, [&](std::size_t x) {
    for (double r : radii) c0[x] = std::max(c0[x], measure(space, Ball{x, r}) / lambda(x, r));
  });
  rep.measured_C0 = *std::max_element(c0.begin(), c0.end());

  const auto grid = radius_grid(space);
  const std::size_t npts = lambda_depends_on_point(lambda) ? n : 1;
  const double log_a[] = {std::log(2.0), std::log(6.0), std::log(36.0)};
  const double a_vals[] = {2.0, 6.0, 36.0};
  rep.measured_m = std::numeric_limits<double>::infinity();
  rep.monotone = true;
  for (std::size_t x = 0; x < npts; ++x) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double r = grid[g];
      const double v = lambda(x, r);
      rep.measured_C_lambda = std::max(rep.measured_C_lambda, v / lambda(x, r / 2.0));
      for (int a = 0; a < 3; ++a)
        rep.measured_m = std::min(rep.measured_m, std::log(lambda(x, a_vals[a] * r) / v) / log_a[a]);
      if (g + 1 < grid.size() && lambda(x, grid[g + 1]) < v) rep.monotone = false;
    }
  }

  rep.measured_C_tilde = 1.0;
  if (lambda_depends_on_point(lambda)) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        const double d = space.distance(x, y);
        for (double r : grid)
          if (r >= d) rep.measured_C_tilde = std::max(rep.measured_C_tilde, lambda(x, r) / lambda(y, r));
      }
  }

  // Weak growth: sampled (x, y, r, t) with d(x, y) <= r and t in [0, r].
  {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r_hi = grid.back();
    const double r_lo = grid.front();
    for (std::size_t s = 0; s < options.weak_growth_samples; ++s) {
      const Index x = pick(rng), y = pick(rng);
      const double d = space.distance(x, y);
      const double lo = std::max(d, r_lo);
      const double r = lo * std::pow(r_hi / lo, unit(rng));
      const double t = r * unit(rng);
      if (d + t == 0.0) continue;
      const double base = lambda(x, r);
      const double dev = std::fabs(lambda(y, r + t) - base);
      const double scale = std::pow((d + t) / r, options.epsilon) * base;
      rep.weak_growth_constant = std::max(rep.weak_growth_constant, dev / scale);
      ++rep.weak_growth_samples;
    }
  }

  rep.covering_N0 = max_covering_number(space);
  rep.dimension_n = std::log2(static_cast<double>(rep.covering_N0));
  rep.beta0 = options.beta0 ? *options.beta0 : default_beta0(space, lambda);

  const auto& decl = lambda.declared();
  rep.upper_doubling = rep.measured_C0 <= 1.0;
  rep.lambda_doubling = rep.measured_C_lambda <= decl.C_lambda * (1.0 + 1e-12);
  rep.comparability = rep.measured_C_tilde <= decl.C_tilde * (1.0 + 1e-12);
  rep.lower_scaling = rep.measured_m >= decl.m - 1e-9;
  return rep;
}

}  // namespace nhmms
