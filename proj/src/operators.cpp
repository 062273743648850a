#include "nhmms/operators.hpp"

#include <bit>
#include <cmath>

#include "nhmms/numeric.hpp"
#include "nhmms/parallel.hpp"

namespace nhmms {

namespace {

template <class LambdaAt>
SpaceFunction one_linear(const MetricMeasureSpace& space, double alpha, const SpaceFunction& f,
                         LambdaAt&& lambda_at) {
  require_bound(space, f);
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
  const std::size_t n = space.size();
  std::vector<double> out(n, 0.0);
  parallel_for(n, [&](std::size_t x) {
    CompensatedSum acc;
    for (Index y = 0; y < n; ++y) {
      if (y == x || f[y] == 0.0) continue;
      acc.add(f[y] * space.mass(y) / std::pow(lambda_at(x, y), 1.0 - alpha));
    }
    out[x] = acc.value();
  });
  return {space, std::move(out)};
}

void require_arity(const KernelSpec& spec, std::size_t got, const char* what) {
  if (got != spec.m)
    throw BindingError(std::string(what) + ": kernel is " + std::to_string(spec.m) +
                       "-linear, got " + std::to_string(got) + " functions");
}

}  // namespace

SpaceFunction fractional_integral(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                                  double alpha, const SpaceFunction& f) {
  return one_linear(space, alpha, f,
                    [&](Index x, Index y) { return lambda(y, space.distance(x, y)); });
}

SpaceFunction fractional_integral_centered(const MetricMeasureSpace& space,
                                           const DominatingFunction& lambda, double alpha,
                                           const SpaceFunction& f) {
  return one_linear(space, alpha, f,
                    [&](Index x, Index y) { return lambda(x, space.distance(x, y)); });
}

namespace {

/// Shared tuple sum. With symbols, slot j is weighted by
/// (b_j(x) - b_j(y_j)); a null symbol leaves the slot unweighted.
SpaceFunction tuple_sum(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                        const KernelSpec& spec, std::span<const SpaceFunction> fs,
                        std::span<const SpaceFunction* const> symbols) {
  spec.validate();
  require_arity(spec, fs.size(), "multilinear_fractional_integral");
  for (const auto& f : fs) require_bound(space, f);
  const std::size_t n = space.size();
  const std::size_t m = spec.m;
  const bool standard = spec.family == "standard";
  const double order = static_cast<double>(m) - spec.alpha;

  std::vector<double> out(n, 0.0);
  parallel_for(n, [&](std::size_t x) {
    // Nonzero support of each slot off the diagonal, with mass folded in.
    std::vector<std::vector<Index>> support(m);
    std::vector<std::vector<double>> weight(m);
    for (std::size_t j = 0; j < m; ++j) {
      for (Index y = 0; y < n; ++y) {
        if (y == x || fs[j][y] == 0.0) continue;
        double w = fs[j][y] * space.mass(y);
        if (!symbols.empty() && symbols[j]) {
          const double diff = (*symbols[j])[x] - (*symbols[j])[y];
          if (diff == 0.0) continue;
          w *= diff;
        }
        support[j].push_back(y);
        weight[j].push_back(w);
      }
      if (support[j].empty()) return;
    }
    std::vector<double> lam(n);
    for (Index y = 0; y < n; ++y) lam[y] = lambda(x, space.distance(x, y));

    std::vector<std::size_t> pos(m, 0);
    std::vector<Index> ys(m);
    CompensatedSum acc;
    for (;;) {
      double w = 1.0;
      double lsum = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        ys[j] = support[j][pos[j]];
        w *= weight[j][pos[j]];
        lsum += lam[ys[j]];
      }
      const double K = standard ? std::pow(lsum, -order) : kernel_eval(space, lambda, spec, x, ys);
      acc.add(K * w);

      std::size_t j = 0;
      while (j < m && ++pos[j] == support[j].size()) pos[j++] = 0;
      if (j == m) break;
    }
    out[x] = acc.value();
  });
  return {space, std::move(out)};
}

}  // namespace

SpaceFunction multilinear_fractional_integral(const MetricMeasureSpace& space,
                                              const DominatingFunction& lambda,
                                              const KernelSpec& spec,
                                              std::span<const SpaceFunction> fs) {
  return tuple_sum(space, lambda, spec, fs, {});
}

SpaceFunction commutator_kernel_form(const MetricMeasureSpace& space,
                                     const DominatingFunction& lambda, const KernelSpec& spec,
                                     std::span<const SpaceFunction* const> symbols,
                                     std::span<const SpaceFunction> fs) {
  require_arity(spec, symbols.size(), "commutator symbols");
  for (const auto* b : symbols)
    if (b) require_bound(space, *b);
  return tuple_sum(space, lambda, spec, fs, symbols);
}

SpaceFunction commutator(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                         const KernelSpec& spec, std::span<const SpaceFunction> bs,
                         std::span<const SpaceFunction> fs) {
  require_arity(spec, bs.size(), "commutator symbols");
  require_arity(spec, fs.size(), "commutator");
  for (const auto& b : bs) require_bound(space, b);
  const std::size_t m = spec.m;
  const std::size_t n = space.size();
  if (m > 16) throw std::invalid_argument("commutator subset sum limited to m <= 16");

  std::vector<CompensatedSum> acc(n);
  std::vector<SpaceFunction> slots(fs.begin(), fs.end());
  // Bit j of sigma set: slot j keeps f_j and b_j(x) multiplies outside.
  for (unsigned sigma = 0; sigma < (1u << m); ++sigma) {
    for (std::size_t j = 0; j < m; ++j)
      slots[j] = (sigma >> j & 1u) ? fs[j] : bs[j] * fs[j];
    const auto value = multilinear_fractional_integral(space, lambda, spec, slots);
    const bool negative = ((m - static_cast<std::size_t>(std::popcount(sigma))) & 1u) != 0;
    for (Index x = 0; x < n; ++x) {
      double coeff = negative ? -1.0 : 1.0;
      for (std::size_t j = 0; j < m; ++j)
        if (sigma >> j & 1u) coeff *= bs[j][x];
      acc[x].add(coeff * value[x]);
    }
  }
  std::vector<double> out(n);
  for (Index x = 0; x < n; ++x) out[x] = acc[x].value();
  return {space, std::move(out)};
}

SpaceFunction commutator_bilinear(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                                  const KernelSpec& spec, const SpaceFunction& b1,
                                  const SpaceFunction& b2, const SpaceFunction& f1,
                                  const SpaceFunction& f2) {
  if (spec.m != 2) throw BindingError("commutator_bilinear needs a bilinear kernel");
  auto I = [&](const SpaceFunction& g1, const SpaceFunction& g2) {
    const SpaceFunction args[] = {g1, g2};
    return multilinear_fractional_integral(space, lambda, spec, args);
  };
  const auto t1 = I(f1, f2);
  const auto t2 = I(f1, b2 * f2);
  const auto t3 = I(b1 * f1, f2);
  const auto t4 = I(b1 * f1, b2 * f2);
  std::vector<double> out(space.size());
  for (Index x = 0; x < space.size(); ++x) {
    CompensatedSum acc;
    acc.add(b1[x] * b2[x] * t1[x]);
    acc.add(-b1[x] * t2[x]);
    acc.add(-b2[x] * t3[x]);
    acc.add(t4[x]);
    out[x] = acc.value();
  }
  return {space, std::move(out)};
}

SpaceFunction single_commutator(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                                const KernelSpec& spec, int slot, const SpaceFunction& b,
                                const SpaceFunction& f1, const SpaceFunction& f2) {
  if (slot != 1 && slot != 2) throw std::invalid_argument("commutator slot must be 1 or 2");
  if (spec.m != 2) throw BindingError("single_commutator needs a bilinear kernel");
  require_bound(space, b);
  const SpaceFunction plain[] = {f1, f2};
  const SpaceFunction weighted[] = {slot == 1 ? b * f1 : f1, slot == 2 ? b * f2 : f2};
  const auto base = multilinear_fractional_integral(space, lambda, spec, plain);
  const auto moved = multilinear_fractional_integral(space, lambda, spec, weighted);
  std::vector<double> out(space.size());
  for (Index x = 0; x < space.size(); ++x) out[x] = b[x] * base[x] - moved[x];
  return {space, std::move(out)};
}

}  // namespace nhmms
