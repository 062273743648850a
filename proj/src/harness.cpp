#include "nhmms/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nhmms/maximal.hpp"
#include "nhmms/numeric.hpp"
#include "nhmms/operators.hpp"
#include "nhmms/parallel.hpp"

namespace nhmms {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sup_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v)
    if (!std::isnan(x)) s = std::max(s, x);
  return s;
}

double sup_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::fabs(x));
  return s;
}

/// LHS / RHS with 0 / 0 = 0 and x / 0 = inf.
double quotient(double lhs, double rhs) {
  if (lhs == 0.0) return 0.0;
  if (rhs == 0.0) return std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isnan(x) || std::isfinite(x); });
}

Json json_array(std::span<const double> v) { return std::vector<double>(v.begin(), v.end()); }

SpaceFunction unit_symbol(const BallCatalog& catalog, const MetricMeasureSpace& space,
                          std::vector<double> values, double* norm_out) {
  SpaceFunction b(space, std::move(values));
  const double norm = rbmo_norm(catalog, b);
  *norm_out = norm;
  return norm > 0.0 ? b.scaled(1.0 / norm) : b;
}

KernelSpec bilinear_kernel(const KernelSpec& kspec, double alpha) {
  if (kspec.m != 2) throw std::invalid_argument("bilinear checks need a kernel with m = 2");
  KernelSpec k = kspec;
  k.alpha = alpha;
  k.validate();
  return k;
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::size_t index) {
  return std::mt19937_64(stream_seed(seed, index));
}

std::vector<double> normal_vector(std::size_t n, std::mt19937_64& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = normal_sample(rng);
  return v;
}

void require_trials(std::size_t trials, std::size_t min) {
  if (trials < min)
    throw std::invalid_argument("need at least " + std::to_string(min) + " trials");
}

}  // namespace

ExponentConfig ExponentConfig::make(double p1, double p2, double alpha, std::optional<double> r) {
  if (!(p1 > 1.0 && std::isfinite(p1)) || !(p2 > 1.0 && std::isfinite(p2)))
    throw std::invalid_argument("p1 and p2 must lie in (1, inf)");
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("alpha must lie in (0, 2)");
  const double inv_q = 1.0 / p1 + 1.0 / p2 - alpha;
  if (!(inv_q > 0.0 && inv_q < 1.0))
    throw std::invalid_argument("1/p1 + 1/p2 - alpha must lie in (0, 1)");
  ExponentConfig c;
  c.p1 = p1;
  c.p2 = p2;
  c.alpha = alpha;
  c.q = 1.0 / inv_q;
  c.r = r.value_or(std::min(2.0, 0.5 * (1.0 + c.q)));
  if (!(c.r > 1.0 && c.r < c.q)) throw std::invalid_argument("r must lie in (1, q)");
  return c;
}

void VerifyReport::summarize() {
  const std::size_t half = ratios.size() / 2;
  const std::span<const double> all(ratios);
  sup_first_half = sup_of(all.first(half));
  sup_second_half = sup_of(all.subspan(half));
  sup = std::max(sup_first_half, sup_second_half);
  degenerate = std::all_of(ratios.begin(), ratios.end(), [](double x) { return std::isnan(x); });
}

Json VerifyReport::to_json() const {
  Json j;
  j["name"] = name;
  j["trials"] = trials;
  j["seed"] = seed;
  j["ratios"] = json_array(ratios);
  j["sup_first_half"] = sup_first_half;
  j["sup_second_half"] = sup_second_half;
  j["sup"] = sup;
  j["pass"] = pass;
  j["degenerate"] = degenerate;
  j["metadata"] = metadata;
  return j;
}

NormTarget norm_target_from_string(const std::string& s) {
  if (s == "ialpha2") return NormTarget::ialpha2;
  if (s == "comm12") return NormTarget::comm12;
  if (s == "comm1") return NormTarget::comm1;
  if (s == "comm2") return NormTarget::comm2;
  if (s == "talpha") return NormTarget::talpha;
  throw std::invalid_argument("unknown operator '" + s + "'");
}

std::string to_string(NormTarget t) {
  switch (t) {
    case NormTarget::ialpha2: return "ialpha2";
    case NormTarget::comm12: return "comm12";
    case NormTarget::comm1: return "comm1";
    case NormTarget::comm2: return "comm2";
    case NormTarget::talpha: return "talpha";
  }
  return "?";
}

double normal_sample(std::mt19937_64& rng) {
  const double u1 = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
  const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

TrialInput default_trial(const MetricMeasureSpace& space, std::size_t index, std::mt19937_64& rng) {
  const std::size_t n = space.size();
  TrialInput in{normal_vector(n, rng), normal_vector(n, rng), normal_vector(n, rng),
                normal_vector(n, rng)};
  if (index % 2 == 1) {
    const auto radii = space.admissible_radii();
    const Ball ball{static_cast<Index>(rng() % n), radii[rng() % radii.size()]};
    for (Index j = 0; j < n; ++j)
      if (!space.contains(ball, j)) in.f1[j] = in.f2[j] = 0.0;
  }
  return in;
}

VerifyReport estimate_operator_norm(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                                    const KernelSpec& kspec, const ExponentConfig& exps_in,
                                    NormTarget which, std::size_t trials, std::uint64_t seed,
                                    const NormOptions& options) {
  const auto exps = ExponentConfig::make(exps_in.p1, exps_in.p2, exps_in.alpha, exps_in.r);
  require_trials(trials, 2);
  const bool one_linear = which == NormTarget::talpha;
  const bool needs_symbols = which == NormTarget::comm12 || which == NormTarget::comm1 ||
                             which == NormTarget::comm2;
  const double half_alpha = exps.alpha / 2.0;
  KernelSpec kernel = kspec;
  if (!one_linear) kernel = bilinear_kernel(kspec, exps.alpha);
  double target_q = exps.q;
  if (one_linear) {
    const double inv = 1.0 / exps.p1 - half_alpha;
    if (!(half_alpha < 1.0 && inv > 0.0))
      throw std::invalid_argument("talpha needs 1/p1 - alpha/2 in (0, 1)");
    target_q = 1.0 / inv;
  }

  std::optional<BallCatalog> catalog;
  if (needs_symbols)
    catalog.emplace(options.beta0 ? BallCatalog(space, lambda, *options.beta0)
                                  : BallCatalog(space, lambda));

  std::vector<double> raw(trials, kNaN), centered(trials, kNaN);
  parallel_for(trials, [&](std::size_t t) {
    auto rng = trial_rng(seed, t);
    TrialInput in = options.source ? options.source(t, rng) : default_trial(space, t, rng);
    if (in.b1.empty() || in.b2.empty()) {
      auto fallback = default_trial(space, t, rng);
      if (in.b1.empty()) in.b1 = std::move(fallback.b1);
      if (in.b2.empty()) in.b2 = std::move(fallback.b2);
    }
    const SpaceFunction f1(space, std::move(in.f1));
    const SpaceFunction f2(space, std::move(in.f2));
    const double d1 = lp_norm(space, f1, exps.p1);
    const double d2 = one_linear ? 1.0 : lp_norm(space, f2, exps.p2);
    if (d1 == 0.0 || d2 == 0.0) return;

    std::optional<SpaceFunction> out;
    if (one_linear) {
      out = fractional_integral(space, lambda, half_alpha, f1);
    } else if (!needs_symbols) {
      const SpaceFunction fs[] = {f1, f2};
      out = multilinear_fractional_integral(space, lambda, kernel, fs);
    } else {
      double n1 = 0.0, n2 = 0.0;
      const auto b1 = unit_symbol(*catalog, space, std::move(in.b1), &n1);
      const auto b2 = unit_symbol(*catalog, space, std::move(in.b2), &n2);
      const SpaceFunction fs[] = {f1, f2};
      const SpaceFunction* symbols[2] = {nullptr, nullptr};
      if (which != NormTarget::comm2) {
        if (n1 == 0.0) return;
        symbols[0] = &b1;
      }
      if (which != NormTarget::comm1) {
        if (n2 == 0.0) return;
        symbols[1] = &b2;
      }
      out = commutator_kernel_form(space, lambda, kernel, symbols, fs);
    }
    const double denom = d1 * d2;
    raw[t] = lp_norm(space, *out, target_q) / denom;
    centered[t] = lp_norm(space, mean_centered(space, *out), target_q) / denom;
  });

  VerifyReport rep;
  rep.name = "operator_norm:" + to_string(which);
  rep.trials = trials;
  rep.seed = seed;
  rep.ratios = options.centered ? centered : raw;
  rep.summarize();
  rep.pass = !rep.degenerate && rep.sup_second_half <= options.ratio_factor * rep.sup_first_half;

  VerifyReport other;
  other.ratios = options.centered ? raw : centered;
  other.summarize();
  rep.metadata["operator"] = to_string(which);
  rep.metadata["mode"] = options.centered ? "centered" : "raw";
  rep.metadata["p1"] = exps.p1;
  if (!one_linear) rep.metadata["p2"] = exps.p2;
  rep.metadata["alpha"] = one_linear ? half_alpha : exps.alpha;
  rep.metadata["q"] = target_q;
  rep.metadata["ratio_factor"] = options.ratio_factor;
  if (!one_linear) rep.metadata["kernel"] = kernel.family;
  rep.metadata["other_mode"] = {{"mode", options.centered ? "raw" : "centered"},
                                {"ratios", json_array(other.ratios)},
                                {"sup_first_half", other.sup_first_half},
                                {"sup_second_half", other.sup_second_half},
                                {"sup", other.sup}};
  rep.metadata["note"] =
      "finite-sample evidence for a uniform bound; pass means sup over the second half of the "
      "trials stays within ratio_factor of the first half";
  if (one_linear) rep.metadata["unchecked_hypothesis"] = "epsilon-weak reverse doubling";
  return rep;
}

namespace {

struct SharpConstantValues {
  std::vector<double> c30, c31, c32;
};

SharpConstantValues compute_sharp_constants(const BallCatalog& catalog, const KernelSpec& kernel,
                                const ExponentConfig& exps, const SpaceFunction& b1,
                                const SpaceFunction& b2, const SpaceFunction& f1,
                                const SpaceFunction& f2) {
  const MetricMeasureSpace& space = catalog.space();
  const DominatingFunction& lambda = catalog.lambda();
  const double half = exps.alpha / 2.0;
  const double n1 = rbmo_norm(catalog, b1);
  const double n2 = rbmo_norm(catalog, b2);

  const SpaceFunction fs[] = {f1, f2};
  const SpaceFunction* both[] = {&b1, &b2};
  const SpaceFunction* first[] = {&b1, nullptr};
  const SpaceFunction* second[] = {nullptr, &b2};
  const auto I = multilinear_fractional_integral(space, lambda, kernel, fs);
  const auto G = commutator_kernel_form(space, lambda, kernel, both, fs);
  const auto C1 = commutator_kernel_form(space, lambda, kernel, first, fs);
  const auto C2 = commutator_kernel_form(space, lambda, kernel, second, fs);

  const auto lhs30 = sharp_maximal(catalog, G, half);
  const auto lhs31 = sharp_maximal(catalog, C1, half);
  const auto lhs32 = sharp_maximal(catalog, C2, half);

  auto Mr6 = [&](const SpaceFunction& h) { return fractional_maximal(space, h, exps.r, 6.0, 0.0); };
  const auto mI = Mr6(I);
  const auto mC1 = Mr6(C1);
  const auto mC2 = Mr6(C2);
  const auto mf1 = fractional_maximal(space, f1, exps.p1, 5.0, half);
  const auto mf2 = fractional_maximal(space, f2, exps.p2, 5.0, 0.0);
  const auto mf2a = fractional_maximal(space, f2, exps.p2, 5.0, half);

  const std::size_t n = space.size();
  SharpConstantValues v{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (Index x = 0; x < n; ++x) {
    const double rhs30 = n1 * n2 * mI[x] + n1 * mC2[x] + n2 * mC1[x] + n1 * n2 * mf1[x] * mf2[x];
    const double rhs31 = n1 * mI[x] + n1 * mf1[x] * mf2a[x];
    const double rhs32 = n2 * mI[x] + n2 * mf1[x] * mf2a[x];
    v.c30[x] = quotient(lhs30[x], rhs30);
    v.c31[x] = quotient(lhs31[x], rhs31);
    v.c32[x] = quotient(lhs32[x], rhs32);
  }
  return v;
}

double max_of(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

BallCatalog make_catalog(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                         std::optional<double> beta0) {
  return beta0 ? BallCatalog(space, lambda, *beta0) : BallCatalog(space, lambda);
}

}  // namespace

VerifyReport check_sharp_constants(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                                     const KernelSpec& kspec, const ExponentConfig& exps_in,
                                     const SpaceFunction& b1, const SpaceFunction& b2,
                                     const SpaceFunction& f1, const SpaceFunction& f2,
                                     std::optional<double> beta0) {
  const auto exps = ExponentConfig::make(exps_in.p1, exps_in.p2, exps_in.alpha, exps_in.r);
  const KernelSpec kernel = bilinear_kernel(kspec, exps.alpha);
  const BallCatalog catalog = make_catalog(space, lambda, beta0);
  const auto v = compute_sharp_constants(catalog, kernel, exps, b1, b2, f1, f2);

  VerifyReport rep;
  rep.name = "sharp_constants";
  rep.trials = 1;
  rep.ratios = v.c30;
  rep.summarize();
  rep.degenerate = false;
  rep.pass = all_finite(v.c30) && all_finite(v.c31) && all_finite(v.c32);
  rep.metadata["max_C_bilinear"] = max_of(v.c30);
  rep.metadata["max_C_slot1"] = max_of(v.c31);
  rep.metadata["max_C_slot2"] = max_of(v.c32);
  rep.metadata["C_slot1"] = json_array(v.c31);
  rep.metadata["C_slot2"] = json_array(v.c32);
  rep.metadata["r"] = exps.r;
  rep.metadata["beta0"] = catalog.beta0();
  return rep;
}

VerifyReport sharp_constant_trials(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                            const KernelSpec& kspec, const ExponentConfig& exps_in, std::size_t trials,
                            std::uint64_t seed, std::optional<double> beta0) {
  const auto exps = ExponentConfig::make(exps_in.p1, exps_in.p2, exps_in.alpha, exps_in.r);
  require_trials(trials, 1);
  const KernelSpec kernel = bilinear_kernel(kspec, exps.alpha);
  const BallCatalog catalog = make_catalog(space, lambda, beta0);

  std::vector<double> c30(trials), c31(trials), c32(trials);
  parallel_for(trials, [&](std::size_t t) {
    auto rng = trial_rng(seed, t);
    auto in = default_trial(space, t, rng);
    const auto v = compute_sharp_constants(catalog, kernel, exps, SpaceFunction(space, in.b1),
                                     SpaceFunction(space, in.b2), SpaceFunction(space, in.f1),
                                     SpaceFunction(space, in.f2));
    c30[t] = max_of(v.c30);
    c31[t] = max_of(v.c31);
    c32[t] = max_of(v.c32);
  });

  VerifyReport rep;
  rep.name = "sharp_constants";
  rep.trials = trials;
  rep.seed = seed;
  rep.ratios = c30;
  rep.summarize();
  rep.pass = !rep.degenerate && all_finite(c30) && all_finite(c31) && all_finite(c32);
  rep.metadata["C_slot1"] = json_array(c31);
  rep.metadata["C_slot2"] = json_array(c32);
  rep.metadata["max_C_slot1"] = max_of(c31);
  rep.metadata["max_C_slot2"] = max_of(c32);
  rep.metadata["p1"] = exps.p1;
  rep.metadata["p2"] = exps.p2;
  rep.metadata["alpha"] = exps.alpha;
  rep.metadata["r"] = exps.r;
  rep.metadata["beta0"] = catalog.beta0();
  return rep;
}

VerifyReport check_maximal_ratio(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                                 const SpaceFunction& f, double p, double beta,
                                 std::optional<double> beta0) {
  require_bound(space, f);
  if (!(p > 1.0 && std::isfinite(p))) throw std::invalid_argument("p must lie in (1, inf)");
  VerifyReport rep;
  rep.name = "maximal_ratio";
  rep.trials = 1;
  rep.ratios = {kNaN};
  const auto vals = f.values();
  const bool constant = std::all_of(vals.begin(), vals.end(), [&](double v) { return v == vals[0]; });
  if (!constant) {
    const BallCatalog catalog = make_catalog(space, lambda, beta0);
    const auto fc = mean_centered(space, f);
    const double num = lp_norm(space, doubling_maximal(space, fc, catalog.beta0()), p);
    const double den = lp_norm(space, sharp_maximal(catalog, fc, beta), p);
    if (den > 0.0) rep.ratios[0] = num / den;
    rep.metadata["beta0"] = catalog.beta0();
  }
  rep.summarize();
  rep.pass = !rep.degenerate && all_finite(rep.ratios);
  rep.metadata["p"] = p;
  rep.metadata["beta"] = beta;
  return rep;
}

namespace {

struct ProductBound {
  std::vector<double> ratio;
  double min_slack = std::numeric_limits<double>::infinity();
  bool pass = true;
};

ProductBound product_bound(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                           double alpha, double alpha1, double alpha2, const SpaceFunction& f1,
                           const SpaceFunction& f2, double slack) {
  if (!(alpha1 > 0.0 && alpha1 < 1.0 && alpha2 > 0.0 && alpha2 < 1.0))
    throw std::invalid_argument("split exponents must lie in (0, 1)");
  if (std::fabs(alpha1 + alpha2 - alpha) > 1e-12)
    throw std::invalid_argument("split exponents must sum to alpha");
  KernelSpec kernel;
  kernel.m = 2;
  kernel.alpha = alpha;
  const SpaceFunction fs[] = {f1, f2};
  const auto I = multilinear_fractional_integral(space, lambda, kernel, fs);
  const auto T1 = fractional_integral_centered(space, lambda, alpha1, f1.abs());
  const auto T2 = fractional_integral_centered(space, lambda, alpha2, f2.abs());
  ProductBound out;
  out.ratio.resize(space.size());
  for (Index x = 0; x < space.size(); ++x) {
    const double lhs = std::fabs(I[x]);
    const double rhs = T1[x] * T2[x];
    const double s = (rhs - lhs) / std::max(1.0, rhs);
    out.min_slack = std::min(out.min_slack, s);
    if (s < -slack) out.pass = false;
    out.ratio[x] = quotient(lhs, rhs);
  }
  return out;
}

}  // namespace

VerifyReport check_product_bound(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                                 double alpha, double alpha1, double alpha2,
                                 const SpaceFunction& f1, const SpaceFunction& f2, double slack) {
  const auto pb = product_bound(space, lambda, alpha, alpha1, alpha2, f1, f2, slack);
  VerifyReport rep;
  rep.name = "product_bound";
  rep.trials = 1;
  rep.ratios = pb.ratio;
  rep.summarize();
  rep.degenerate = false;
  rep.pass = pb.pass;
  rep.metadata["min_normalized_slack"] = pb.min_slack;
  rep.metadata["alpha"] = alpha;
  rep.metadata["split"] = {alpha1, alpha2};
  return rep;
}

VerifyReport product_bound_trials(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                                  double alpha, double alpha1, double alpha2, std::size_t trials,
                                  std::uint64_t seed, double slack) {
  require_trials(trials, 1);
  std::vector<double> ratio(trials), min_slack(trials);
  std::vector<char> ok(trials);
  parallel_for(trials, [&](std::size_t t) {
    auto rng = trial_rng(seed, t);
    auto in = default_trial(space, t, rng);
    const auto pb = product_bound(space, lambda, alpha, alpha1, alpha2, SpaceFunction(space, in.f1),
                                  SpaceFunction(space, in.f2), slack);
    ratio[t] = max_of(pb.ratio);
    min_slack[t] = pb.min_slack;
    ok[t] = pb.pass;
  });
  VerifyReport rep;
  rep.name = "product_bound";
  rep.trials = trials;
  rep.seed = seed;
  rep.ratios = ratio;
  rep.summarize();
  const auto failures = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 0));
  rep.pass = !rep.degenerate && failures == 0;
  rep.metadata["failing_trials"] = failures;
  rep.metadata["min_normalized_slack"] = *std::min_element(min_slack.begin(), min_slack.end());
  rep.metadata["alpha"] = alpha;
  rep.metadata["split"] = {alpha1, alpha2};
  rep.metadata["slack"] = slack;
  return rep;
}

VerifyReport check_mean_chain(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                           std::size_t trials, std::uint64_t seed, std::optional<double> beta0) {
  require_trials(trials, 1);
  const BallCatalog catalog = make_catalog(space, lambda, beta0);
  constexpr int kSteps = 5;
  std::vector<double> worst(trials, kNaN);
  std::vector<std::vector<double>> per_j(trials, std::vector<double>(kSteps, 0.0));
  parallel_for(trials, [&](std::size_t t) {
    auto rng = trial_rng(seed, t);
    const SpaceFunction b(space, normal_vector(space.size(), rng));
    const double norm = rbmo_norm(catalog, b);
    if (norm == 0.0) return;
    const PrefixMeans means(space, b.values());
    double w = 0.0;
    for (const CatalogBall& cb : catalog.balls()) {
      const Index c = cb.ball.center;
      const double base = means.mean(c, cb.tilde_count);
      double factor = 1.2;
      for (int j = 1; j <= kSteps; ++j) {
        factor *= 6.0;
        const auto dd = smallest_doubling_dilate(space, cb.ball.dilated(factor), catalog.beta0());
        const double m = means.mean(c, space.member_count(dd.ball));
        const double v = std::fabs(m - base) / (j * norm);
        per_j[t][static_cast<std::size_t>(j - 1)] = std::max(per_j[t][static_cast<std::size_t>(j - 1)], v);
        w = std::max(w, v);
      }
    }
    worst[t] = w;
  });
  VerifyReport rep;
  rep.name = "mean_chain";
  rep.trials = trials;
  rep.seed = seed;
  rep.ratios = worst;
  rep.summarize();
  rep.pass = !rep.degenerate && all_finite(worst);
  std::vector<double> by_j(kSteps, 0.0);
  for (const auto& row : per_j)
    for (int j = 0; j < kSteps; ++j) by_j[static_cast<std::size_t>(j)] = std::max(by_j[static_cast<std::size_t>(j)], row[static_cast<std::size_t>(j)]);
  rep.metadata["max_by_j"] = by_j;
  rep.metadata["beta0"] = catalog.beta0();
  return rep;
}

VerifyReport check_commutator_algebra(const MetricMeasureSpace& space,
                                      const DominatingFunction& lambda, const KernelSpec& kspec,
                                      std::size_t trials, std::uint64_t seed, double tolerance) {
  require_trials(trials, 1);
  kspec.validate();
  const std::size_t m = kspec.m;
  std::vector<double> err(trials);
  parallel_for(trials, [&](std::size_t t) {
    auto rng = trial_rng(seed, t);
    std::vector<SpaceFunction> bs, fs;
    for (std::size_t j = 0; j < m; ++j) bs.emplace_back(space, normal_vector(space.size(), rng));
    for (std::size_t j = 0; j < m; ++j) fs.emplace_back(space, normal_vector(space.size(), rng));
    std::vector<const SpaceFunction*> symbols;
    for (const auto& b : bs) symbols.push_back(&b);
    const auto subset = commutator(space, lambda, kspec, bs, fs);
    const auto direct = commutator_kernel_form(space, lambda, kspec, symbols, fs);
    const double scale = std::max(sup_norm(direct.values()), std::numeric_limits<double>::min());
    double e = sup_norm((subset - direct).values()) / scale;
    if (m == 2) {
      const auto four = commutator_bilinear(space, lambda, kspec, bs[0], bs[1], fs[0], fs[1]);
      e = std::max(e, sup_norm((subset - four).values()) / scale);
    }
    err[t] = e;
  });
  VerifyReport rep;
  rep.name = "commutator_algebra";
  rep.trials = trials;
  rep.seed = seed;
  rep.ratios = err;
  rep.summarize();
  rep.pass = std::all_of(err.begin(), err.end(), [&](double e) { return e <= tolerance; });
  rep.metadata["tolerance"] = tolerance;
  rep.metadata["m"] = m;
  return rep;
}

Json to_json(const DoublingReport& r) {
  Json j;
  j["measured_C0"] = r.measured_C0;
  j["measured_C_lambda"] = r.measured_C_lambda;
  j["measured_C_tilde"] = r.measured_C_tilde;
  j["measured_m"] = r.measured_m;
  j["weak_growth_epsilon"] = r.weak_growth_epsilon;
  j["weak_growth_constant"] = r.weak_growth_constant;
  j["weak_growth_samples"] = r.weak_growth_samples;
  j["covering_N0"] = r.covering_N0;
  j["dimension_n"] = r.dimension_n;
  j["beta0"] = r.beta0;
  j["upper_doubling"] = r.upper_doubling;
  j["lambda_doubling"] = r.lambda_doubling;
  j["comparability"] = r.comparability;
  j["lower_scaling"] = r.lower_scaling;
  j["monotone"] = r.monotone;
  j["pass"] = r.pass();
  return j;
}

Json to_json(const KernelReport& r) {
  Json j;
  j["size_measured"] = r.size_measured;
  j["size_pass"] = r.size_pass;
  j["smooth_x_measured"] = r.smooth_x_measured;
  j["smooth_y_measured"] = r.smooth_y_measured;
  j["smooth_pass"] = r.smooth_pass;
  j["samples"] = r.samples;
  j["pass"] = r.pass();
  return j;
}

VerifyReport doubling_report(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                             const DoublingCheckOptions& options) {
  const auto r = check_upper_doubling(space, lambda, options);
  VerifyReport rep;
  rep.name = "upper_doubling";
  rep.trials = 1;
  rep.seed = options.seed;
  rep.ratios = {r.measured_C0};
  rep.summarize();
  rep.pass = r.pass();
  rep.metadata = to_json(r);
  return rep;
}

VerifyReport kernel_report(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                           const KernelSpec& kspec, const KernelCheckOptions& options) {
  const auto r = check_kernel(space, lambda, kspec, options);
  VerifyReport rep;
  rep.name = "kernel";
  rep.trials = r.samples;
  rep.seed = options.seed;
  rep.ratios = {r.size_measured};
  rep.summarize();
  rep.pass = r.pass();
  rep.metadata = to_json(r);
  rep.metadata["family"] = kspec.family;
  rep.metadata["declared_C_size"] = kspec.C_size;
  rep.metadata["declared_C_smooth"] = kspec.C_smooth ? Json(*kspec.C_smooth) : Json(nullptr);
  return rep;
}

}  // namespace nhmms
