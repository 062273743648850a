#pragma once

#include <span>
#include <string>
#include <vector>

#include "nhmms/calculus.hpp"
#include "nhmms/kernel.hpp"

namespace nhmms {

/// T_alpha f(x) = sum_{y != x} f(y) mass(y) / lambda(y, d(x, y))^(1 - alpha),
/// with lambda evaluated at the integration variable y.
SpaceFunction fractional_integral(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                                  double alpha, const SpaceFunction& f);

/// Same sum with lambda(x, d(x, y)), the form that factors the bilinear
/// standard kernel.
SpaceFunction fractional_integral_centered(const MetricMeasureSpace& space,
                                           const DominatingFunction& lambda, double alpha,
                                           const SpaceFunction& f);

/// I_{alpha,m}(f_1..f_m)(x) = sum over tuples with every y_j != x of
/// K(x, y) prod_j f_j(y_j) mass(y_j).
SpaceFunction multilinear_fractional_integral(const MetricMeasureSpace& space,
                                              const DominatingFunction& lambda,
                                              const KernelSpec& spec,
                                              std::span<const SpaceFunction> fs);

/// Alternating subset sum over every sigma subset of {1..m}:
/// sum (-1)^(m - |sigma|) b_sigma(x) I(f_sigma, (b f)_sigma')(x).
SpaceFunction commutator(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                         const KernelSpec& spec, std::span<const SpaceFunction> bs,
                         std::span<const SpaceFunction> fs);

/// The same commutator as the kernel-side sum of
/// K(x, y) prod_j (b_j(x) - b_j(y_j)) f_j(y_j) mass(y_j). A null symbol
/// leaves its slot without a difference factor, so {&b, nullptr} is the
/// slot-1 single commutator. Constant symbols give exact zeros.
SpaceFunction commutator_kernel_form(const MetricMeasureSpace& space,
                                     const DominatingFunction& lambda, const KernelSpec& spec,
                                     std::span<const SpaceFunction* const> symbols,
                                     std::span<const SpaceFunction> fs);

/// The four-term bilinear expansion
/// b1 b2 I(f1, f2) - b1 I(f1, b2 f2) - b2 I(b1 f1, f2) + I(b1 f1, b2 f2).
SpaceFunction commutator_bilinear(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                                  const KernelSpec& spec, const SpaceFunction& b1,
                                  const SpaceFunction& b2, const SpaceFunction& f1,
                                  const SpaceFunction& f2);

/// slot 1: b I(f1, f2) - I(b f1, f2); slot 2: b I(f1, f2) - I(f1, b f2).
SpaceFunction single_commutator(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                                const KernelSpec& spec, int slot, const SpaceFunction& b,
                                const SpaceFunction& f1, const SpaceFunction& f2);

}  // namespace nhmms
