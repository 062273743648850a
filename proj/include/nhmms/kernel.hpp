#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nhmms/space.hpp"

namespace nhmms {

/// m-linear fractional kernel family and its declared constants.
struct KernelSpec {
  std::string family = "standard";
  std::size_t m = 2;
  double alpha = 0.5;     // in (0, m)
  double C_size = 1.0;    // |K| <= C_size / [sum_j lambda(x, d(x, y_j))]^(m - alpha)
  double delta = 1.0;     // smoothness exponent in (0, 1]
  // Declared constant of both smoothness bounds; unset means the
  // checker only measures smoothness.
  std::optional<double> C_smooth;

  void validate() const;
};

/// Evaluator behind a registered kernel family. Called only off the full
/// diagonal, with ys.size() == spec.m.
using KernelEvaluator =
    std::function<double(const MetricMeasureSpace&, const DominatingFunction&, const KernelSpec&,
                         Index x, std::span<const Index> ys)>;

/// Registers (or replaces) a named kernel family. "standard" and
/// "standard_x10" are always present.
void register_kernel(const std::string& name, KernelEvaluator evaluator);
bool kernel_registered(const std::string& name);

/// [sum_j lambda(x, d(x, y_j))]^-(m - alpha).
double standard_kernel(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                       double alpha, Index x, std::span<const Index> ys);

/// sum_j lambda(x, d(x, y_j)), the size-condition denominator base.
double lambda_sum(const MetricMeasureSpace& space, const DominatingFunction& lambda, Index x,
                  std::span<const Index> ys);

/// Throws std::domain_error when every y_j equals x.
double kernel_eval(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                   const KernelSpec& spec, Index x, std::span<const Index> ys);

struct KernelReport {
  bool size_pass = false;
  double size_measured = 0.0;
  double smooth_x_measured = 0.0;
  std::vector<double> smooth_y_measured;  // per slot
  bool smooth_pass = false;
  std::size_t samples = 0;

  [[nodiscard]] bool pass() const { return size_pass && smooth_pass; }
};

struct KernelCheckOptions {
  std::size_t sample_budget = 4000;
  std::uint64_t seed = 1;
  /// C in the side condition C d(x, x') <= max_j d(x, y_j).
  double side_constant = 1.0;
};

/// Samples admissible tuples and measures the size and smoothness
/// constants; deterministic in the seed.
KernelReport check_kernel(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                          const KernelSpec& spec, const KernelCheckOptions& options = {});

}  // namespace nhmms
