#include "nhmms/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>

namespace nhmms {

namespace {

struct Registry {
  std::mutex mu;
  std::map<std::string, KernelEvaluator> kernels;

  Registry() {
    kernels["standard"] = [](const MetricMeasureSpace& s, const DominatingFunction& l,
                             const KernelSpec& k, Index x, std::span<const Index> ys) {
      return standard_kernel(s, l, k.alpha, x, ys);
    };
    kernels["standard_x10"] = [](const MetricMeasureSpace& s, const DominatingFunction& l,
                                 const KernelSpec& k, Index x, std::span<const Index> ys) {
      return 10.0 * standard_kernel(s, l, k.alpha, x, ys);
    };
  }
};

Registry& registry() {
  static Registry r;
  return r;
}

KernelEvaluator lookup(const std::string& name) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  auto it = r.kernels.find(name);
  if (it == r.kernels.end()) throw std::invalid_argument("unknown kernel family '" + name + "'");
  return it->second;
}

bool full_diagonal(Index x, std::span<const Index> ys) {
  return std::all_of(ys.begin(), ys.end(), [x](Index y) { return y == x; });
}

double sum_distances(const MetricMeasureSpace& space, Index x, std::span<const Index> ys) {
  double s = 0.0;
  for (Index y : ys) s += space.distance(x, y);
  return s;
}

double max_distance(const MetricMeasureSpace& space, Index x, std::span<const Index> ys) {
  double s = 0.0;
  for (Index y : ys) s = std::max(s, space.distance(x, y));
  return s;
}

}  // namespace

void KernelSpec::validate() const {
  if (m < 1) throw std::invalid_argument("kernel linearity m must be >= 1");
  if (!(alpha > 0.0 && alpha < static_cast<double>(m)))
    throw std::invalid_argument("kernel alpha must lie in (0, m)");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("kernel delta must lie in (0, 1]");
  if (!(C_size > 0.0) || (C_smooth && !(*C_smooth > 0.0)))
    throw std::invalid_argument("declared kernel constants must be positive");
  if (!kernel_registered(family)) throw std::invalid_argument("unknown kernel family '" + family + "'");
}

void register_kernel(const std::string& name, KernelEvaluator evaluator) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  r.kernels[name] = std::move(evaluator);
}

bool kernel_registered(const std::string& name) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  return r.kernels.count(name) != 0;
}

double lambda_sum(const MetricMeasureSpace& space, const DominatingFunction& lambda, Index x,
                  std::span<const Index> ys) {
  double s = 0.0;
  for (Index y : ys) s += lambda(x, space.distance(x, y));
  return s;
}

double standard_kernel(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                       double alpha, Index x, std::span<const Index> ys) {
  return std::pow(lambda_sum(space, lambda, x, ys), -(static_cast<double>(ys.size()) - alpha));
}

double kernel_eval(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                   const KernelSpec& spec, Index x, std::span<const Index> ys) {
  space.check_index(x);
  if (ys.size() != spec.m)
    throw BindingError("kernel expects " + std::to_string(spec.m) + " arguments, got " +
                       std::to_string(ys.size()));
  for (Index y : ys) space.check_index(y);
  if (full_diagonal(x, ys)) throw std::domain_error("kernel is undefined when every y_j equals x");
  if (spec.family == "standard") return standard_kernel(space, lambda, spec.alpha, x, ys);
  return lookup(spec.family)(space, lambda, spec, x, ys);
}

KernelReport check_kernel(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                          const KernelSpec& spec, const KernelCheckOptions& options) {
  spec.validate();
  if (options.sample_budget < 1) throw std::invalid_argument("sample_budget must be >= 1");
  const std::size_t n = space.size();
  const std::size_t m = spec.m;
  const double order = static_cast<double>(m) - spec.alpha;
  KernelReport rep;
  rep.smooth_y_measured.assign(m, 0.0);
  if (n < 2) {
    rep.size_pass = rep.smooth_pass = true;
    return rep;
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<Index> pick(0, n - 1);
  std::vector<Index> ys(m), alt(m), pool;
  pool.reserve(n);

  auto choose = [&](auto&& admissible) -> std::optional<Index> {
    pool.clear();
    for (Index z = 0; z < n; ++z)
      if (admissible(z)) pool.push_back(z);
    if (pool.empty()) return std::nullopt;
    std::uniform_int_distribution<std::size_t> at(0, pool.size() - 1);
    return pool[at(rng)];
  };

  for (std::size_t s = 0; s < options.sample_budget; ++s) {
    const Index x = pick(rng);
    for (auto& y : ys) y = pick(rng);
    if (full_diagonal(x, ys)) continue;
    ++rep.samples;

    const double K = kernel_eval(space, lambda, spec, x, ys);
    const double denom = std::pow(lambda_sum(space, lambda, x, ys), order);
    rep.size_measured = std::max(rep.size_measured, std::fabs(K) * denom);

    const double reach = max_distance(space, x, ys);
    const double spread = std::pow(sum_distances(space, x, ys), spec.delta);

    // Smoothness in x.
    if (auto xp = choose([&](Index z) {
          return z != x && options.side_constant * space.distance(x, z) <= reach &&
                 !full_diagonal(z, ys);
        })) {
      const double dK = std::fabs(K - kernel_eval(space, lambda, spec, *xp, ys));
      const double c = dK * spread * denom / std::pow(space.distance(x, *xp), spec.delta);
      rep.smooth_x_measured = std::max(rep.smooth_x_measured, c);
    }

    // Smoothness in each slot.
    for (std::size_t j = 0; j < m; ++j) {
      alt = ys;
      if (auto yp = choose([&](Index z) {
            if (z == ys[j] || options.side_constant * space.distance(ys[j], z) > reach) return false;
            alt[j] = z;
            return !full_diagonal(x, alt);
          })) {
        alt[j] = *yp;
        const double dK = std::fabs(K - kernel_eval(space, lambda, spec, x, alt));
        const double c = dK * spread * denom / std::pow(space.distance(ys[j], *yp), spec.delta);
        rep.smooth_y_measured[j] = std::max(rep.smooth_y_measured[j], c);
      }
    }
  }

  // Relative 1e-12 allowance: the standard family meets the size bound
  // with equality, up to rounding in pow.
  rep.size_pass = rep.size_measured <= spec.C_size * (1.0 + 1e-12);
  double smooth = rep.smooth_x_measured;
  for (double v : rep.smooth_y_measured) smooth = std::max(smooth, v);
  rep.smooth_pass = !spec.C_smooth || smooth <= *spec.C_smooth * (1.0 + 1e-12);
  return rep;
}

}  // namespace nhmms
