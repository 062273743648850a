#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nhmms/calculus.hpp"
#include "nhmms/io.hpp"
#include "nhmms/kernel.hpp"
#include "nhmms/spacegen.hpp"

namespace nhmms {

/// Exponents of the bilinear fractional estimates, with
/// 1/q = 1/p1 + 1/p2 - alpha and r in (1, q).
struct ExponentConfig {
  double p1 = 3.0;
  double p2 = 3.0;
  double alpha = 0.4;
  double q = 3.75;
  double r = 2.0;

  /// Throws std::invalid_argument unless p1, p2 > 1, alpha in (0, 2),
  /// q in (1, inf) and r in (1, q). r defaults to min(2, (1 + q) / 2).
  static ExponentConfig make(double p1, double p2, double alpha,
                             std::optional<double> r = std::nullopt);
};

struct VerifyReport {
  std::string name;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  /// Per-trial ratio or constant; NaN marks a skipped degenerate trial.
  std::vector<double> ratios;
  double sup_first_half = 0.0;
  double sup_second_half = 0.0;
  double sup = 0.0;
  bool pass = false;
  bool degenerate = false;
  Json metadata = Json::object();
  double wall_seconds = 0.0;

  /// Fills the three sup statistics from `ratios`, ignoring NaN entries;
  /// sets `degenerate` when every entry is NaN.
  void summarize();

  /// Deterministic payload; wall time is left out.
  [[nodiscard]] Json to_json() const;
};

enum class NormTarget { ialpha2, comm12, comm1, comm2, talpha };
NormTarget norm_target_from_string(const std::string& s);
std::string to_string(NormTarget t);

struct TrialInput {
  std::vector<double> f1, f2, b1, b2;
};

/// Produces the raw inputs of trial `index`; `rng` is seeded from
/// (seed, index). An empty b vector keeps the default symbol.
using TrialSource = std::function<TrialInput(std::size_t index, std::mt19937_64& rng)>;

struct NormOptions {
  /// Mean-center operator outputs before taking the L^q norm.
  bool centered = true;
  /// Stabilization factor of the pass rule.
  double ratio_factor = 1.5;
  std::optional<double> beta0;
  TrialSource source;
};

/// Default trial inputs: signed standard normal values on even trials,
/// normal values times the indicator of a random candidate ball on odd ones.
TrialInput default_trial(const MetricMeasureSpace& space, std::size_t index, std::mt19937_64& rng);

/// Standard normal from 53-bit uniforms (Box-Muller), identical on every
/// platform.
double normal_sample(std::mt19937_64& rng);

/// Ratios ||T(f1, f2)||_q / (||f1||_p1 ||f2||_p2) over seeded trials.
/// Commutator symbols are normalized to unit RBMO norm. talpha uses
/// T_{alpha/2} from L^p1 to L^s with 1/s = 1/p1 - alpha/2.
/// Pass: sup over the second half <= ratio_factor * sup over the first.
VerifyReport estimate_operator_norm(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                                    const KernelSpec& kspec, const ExponentConfig& exps,
                                    NormTarget which, std::size_t trials, std::uint64_t seed,
                                    const NormOptions& options = {});

/// Pointwise constants of the three sharp-maximal estimates for the
/// bilinear commutator and the two single commutators. ratios holds
/// C(x) = LHS / RHS of the bilinear estimate (0 where LHS = 0);
/// metadata holds the per-atom constants of all three. Pass iff every
/// constant is finite.
VerifyReport check_sharp_constants(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                                     const KernelSpec& kspec, const ExponentConfig& exps,
                                     const SpaceFunction& b1, const SpaceFunction& b2,
                                     const SpaceFunction& f1, const SpaceFunction& f2,
                                     std::optional<double> beta0 = std::nullopt);

/// Seeded trials of check_sharp_constants; ratios holds the max
/// constant of each trial.
VerifyReport sharp_constant_trials(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                            const KernelSpec& kspec, const ExponentConfig& exps, std::size_t trials,
                            std::uint64_t seed, std::optional<double> beta0 = std::nullopt);

/// ||N f||_p / ||M^{#,(beta)} f||_p after mean-centering f.
VerifyReport check_maximal_ratio(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                                 const SpaceFunction& f, double p, double beta,
                                 std::optional<double> beta0 = std::nullopt);

/// |I_{alpha,2}(f1, f2)(x)| <= T^c_{alpha1}|f1|(x) T^c_{alpha2}|f2|(x) at
/// every atom with slack (RHS - LHS) >= -slack * max(1, RHS). ratios
/// holds LHS / RHS per atom.
VerifyReport check_product_bound(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                                 double alpha, double alpha1, double alpha2,
                                 const SpaceFunction& f1, const SpaceFunction& f2,
                                 double slack = 1e-12);

/// Seeded trials of check_product_bound; ratios holds the max of
/// LHS / RHS over atoms per trial.
VerifyReport product_bound_trials(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                                  double alpha, double alpha1, double alpha2, std::size_t trials,
                                  std::uint64_t seed, double slack = 1e-12);

/// max over candidate balls B and j in 1..5 of
/// |m_{(6^j (6/5) B)~} b - m_{B~} b| / (j ||b||_*) per seeded trial.
/// Pass iff every value is finite.
VerifyReport check_mean_chain(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                           std::size_t trials, std::uint64_t seed,
                           std::optional<double> beta0 = std::nullopt);

/// Subset-sum commutator against the four-term expansion and the
/// kernel-side difference form; ratios holds the larger sup-norm
/// relative error of each trial. Pass iff every error <= tolerance.
VerifyReport check_commutator_algebra(const MetricMeasureSpace& space,
                                      const DominatingFunction& lambda, const KernelSpec& kspec,
                                      std::size_t trials, std::uint64_t seed,
                                      double tolerance = 1e-10);

/// Upper-doubling and kernel checks wrapped as reports.
VerifyReport doubling_report(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                             const DoublingCheckOptions& options = {});
VerifyReport kernel_report(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                           const KernelSpec& kspec, const KernelCheckOptions& options = {});

Json to_json(const DoublingReport& r);
Json to_json(const KernelReport& r);

/// Raised for suite configurations that cannot start.
class SuiteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"family", "m", "alpha", "C_size", "delta", "C_smooth"}, all optional.
KernelSpec kernel_spec_from_json(const Json& j, const KernelSpec& defaults = {});

/// {"family", "dim", "side", "spacing", "level", "exponent", "count"}.
SpaceSpec space_spec_from_json(const Json& j);

struct SuiteResult {
  Json report;  // {"schema_version", "environment", "checks"}
  bool pass = true;
};

/// Runs a suite config:
/// {"seed": 1, "spaces": {name: {"path": ...} | {"gen": {...}}}, "checks": [...]}.
/// Relative paths resolve against `base_dir`. All checks are parsed and
/// their spaces loaded before anything runs.
SuiteResult run_suite(const Json& config, const std::filesystem::path& base_dir = {});
SuiteResult run_suite_file(const std::filesystem::path& path);

}  // namespace nhmms
