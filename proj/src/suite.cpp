#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "nhmms/harness.hpp"
#include "nhmms/numeric.hpp"
#include "nhmms/parallel.hpp"

namespace nhmms {

namespace {

constexpr int kSchemaVersion = 1;

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const Json::exception&) {
    throw SuiteError(std::string("field '") + key + "' has the wrong type");
  }
}

std::optional<double> optional_number(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) return std::nullopt;
  if (!it->is_number()) throw SuiteError(std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

ExponentConfig exponents(const Json& j) {
  try {
    return ExponentConfig::make(get_or(j, "p1", 3.0), get_or(j, "p2", 3.0), get_or(j, "alpha", 0.4),
                                optional_number(j, "r"));
  } catch (const std::invalid_argument& e) {
    throw SuiteError(std::string("invalid exponents: ") + e.what());
  }
}

struct PlannedCheck {
  std::string name;
  std::string type;
  std::function<VerifyReport()> run;
};

VerifyReport maximal_ratio_trials(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                            double p, double beta, std::size_t trials, std::uint64_t seed,
                            std::optional<double> beta0) {
  VerifyReport rep;
  rep.name = "maximal_ratio";
  rep.trials = trials;
  rep.seed = seed;
  rep.ratios.assign(trials, 0.0);
  parallel_for(trials, [&](std::size_t t) {
    std::mt19937_64 rng(stream_seed(seed, t));
    std::vector<double> v(space.size());
    for (double& x : v) x = normal_sample(rng);
    rep.ratios[t] = check_maximal_ratio(space, lambda, SpaceFunction(space, std::move(v)), p, beta,
                                        beta0)
                        .ratios[0];
  });
  rep.summarize();
  rep.pass = !rep.degenerate &&
             std::all_of(rep.ratios.begin(), rep.ratios.end(),
                         [](double r) { return std::isnan(r) || std::isfinite(r); });
  rep.metadata["p"] = p;
  rep.metadata["beta"] = beta;
  return rep;
}

}  // namespace

KernelSpec kernel_spec_from_json(const Json& j, const KernelSpec& defaults) {
  if (!j.is_object()) throw SuiteError("kernel must be an object");
  KernelSpec k = defaults;
  k.family = get_or(j, "family", k.family);
  k.m = get_or(j, "m", k.m);
  k.alpha = get_or(j, "alpha", k.alpha);
  k.C_size = get_or(j, "C_size", k.C_size);
  k.delta = get_or(j, "delta", k.delta);
  if (auto c = optional_number(j, "C_smooth")) k.C_smooth = c;
  try {
    k.validate();
  } catch (const std::exception& e) {
    throw SuiteError(std::string("invalid kernel: ") + e.what());
  }
  return k;
}

SpaceSpec space_spec_from_json(const Json& j) {
  if (!j.is_object()) throw SuiteError("gen must be an object");
  SpaceSpec s;
  try {
    s.family = space_family_from_string(get_or<std::string>(j, "family", "grid"));
  } catch (const std::invalid_argument& e) {
    throw SuiteError(e.what());
  }
  s.dim = get_or(j, "dim", s.dim);
  s.side = get_or(j, "side", s.side);
  s.spacing = get_or(j, "spacing", s.spacing);
  s.level = get_or(j, "level", s.level);
  s.exponent = get_or(j, "exponent", s.exponent);
  s.count = get_or(j, "count", s.count);
  return s;
}

SuiteResult run_suite(const Json& config, const std::filesystem::path& base_dir) {
  if (!config.is_object()) throw SuiteError("suite config must be a JSON object");
  const auto suite_seed = get_or<std::uint64_t>(config, "seed", 1);

  std::map<std::string, SpaceFile> spaces;
  if (config.contains("spaces")) {
    if (!config["spaces"].is_object()) throw SuiteError("'spaces' must be an object");
    for (const auto& [name, entry] : config["spaces"].items()) {
      try {
        if (entry.contains("path")) {
          std::filesystem::path p = entry["path"].get<std::string>();
          if (p.is_relative()) p = base_dir / p;
          spaces.emplace(name, load_space(p));
        } else if (entry.contains("gen")) {
          auto g = generate(space_spec_from_json(entry["gen"]));
          spaces.emplace(name, SpaceFile{std::move(g.space), std::move(g.lambda)});
        } else {
          throw SuiteError("needs 'path' or 'gen'");
        }
      } catch (const std::exception& e) {
        throw SuiteError("space '" + name + "': " + e.what());
      }
    }
  }

  std::vector<PlannedCheck> plan;
  const Json checks = config.value("checks", Json::array());
  if (!checks.is_array()) throw SuiteError("'checks' must be an array");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const Json& c = checks[i];
    const std::string where = "check " + std::to_string(i);
    if (!c.is_object()) throw SuiteError(where + " must be an object");
    const std::string type = get_or<std::string>(c, "type", "");
    const std::string space_name = get_or<std::string>(c, "space", "");
    auto it = spaces.find(space_name);
    if (it == spaces.end()) throw SuiteError(where + ": unknown space '" + space_name + "'");
    const MetricMeasureSpace& space = it->second.space;
    const DominatingFunction& lambda = it->second.lambda;
    const std::uint64_t seed = get_or(c, "seed", suite_seed);
    const auto beta0 = optional_number(c, "beta0");
    PlannedCheck pc;
    pc.type = type;
    pc.name = get_or(c, "name", type + ":" + space_name);

    try {
      if (type == "upper_doubling") {
        DoublingCheckOptions o;
        o.epsilon = get_or(c, "epsilon", o.epsilon);
        o.weak_growth_samples = get_or(c, "samples", o.weak_growth_samples);
        o.seed = seed;
        o.beta0 = beta0;
        pc.run = [&space, &lambda, o] { return doubling_report(space, lambda, o); };
      } else if (type == "kernel") {
        const KernelSpec k = kernel_spec_from_json(c.value("kernel", Json::object()));
        KernelCheckOptions o;
        o.sample_budget = get_or(c, "samples", o.sample_budget);
        o.side_constant = get_or(c, "side_constant", o.side_constant);
        o.seed = seed;
        pc.run = [&space, &lambda, k, o] { return kernel_report(space, lambda, k, o); };
      } else if (type == "operator_norm") {
        const auto exps = exponents(c);
        KernelSpec defaults;
        defaults.alpha = exps.alpha;
        const KernelSpec k = kernel_spec_from_json(c.value("kernel", Json::object()), defaults);
        const NormTarget which = norm_target_from_string(get_or<std::string>(c, "which", "ialpha2"));
        const auto trials = get_or<std::size_t>(c, "trials", 200);
        if (trials < 2) throw SuiteError("operator_norm needs at least 2 trials");
        NormOptions o;
        const auto mode = get_or<std::string>(c, "mode", "centered");
        if (mode != "centered" && mode != "raw") throw SuiteError("mode must be centered or raw");
        o.centered = mode == "centered";
        o.ratio_factor = get_or(c, "ratio_factor", o.ratio_factor);
        o.beta0 = beta0;
        pc.run = [&space, &lambda, k, exps, which, trials, seed, o] {
          return estimate_operator_norm(space, lambda, k, exps, which, trials, seed, o);
        };
      } else if (type == "sharp_constants") {
        const auto exps = exponents(c);
        KernelSpec defaults;
        defaults.alpha = exps.alpha;
        const KernelSpec k = kernel_spec_from_json(c.value("kernel", Json::object()), defaults);
        const auto trials = get_or<std::size_t>(c, "trials", 10);
        pc.run = [&space, &lambda, k, exps, trials, seed, beta0] {
          return sharp_constant_trials(space, lambda, k, exps, trials, seed, beta0);
        };
      } else if (type == "maximal_ratio") {
        const double p = get_or(c, "p", 2.0);
        const double beta = get_or(c, "beta", 0.5);
        if (!(p > 1.0)) throw SuiteError("maximal_ratio needs p > 1");
        const auto trials = get_or<std::size_t>(c, "trials", 10);
        pc.run = [&space, &lambda, p, beta, trials, seed, beta0] {
          return maximal_ratio_trials(space, lambda, p, beta, trials, seed, beta0);
        };
      } else if (type == "product_bound") {
        const double alpha = get_or(c, "alpha", 0.5);
        std::vector<double> split = get_or(c, "split", std::vector<double>{alpha / 2, alpha / 2});
        if (split.size() != 2) throw SuiteError("split must have two entries");
        if (!(split[0] > 0 && split[0] < 1 && split[1] > 0 && split[1] < 1) ||
            std::fabs(split[0] + split[1] - alpha) > 1e-12)
          throw SuiteError("split must be two exponents in (0, 1) summing to alpha");
        const auto trials = get_or<std::size_t>(c, "trials", 200);
        const double slack = get_or(c, "slack", 1e-12);
        pc.run = [&space, &lambda, alpha, split, trials, seed, slack] {
          return product_bound_trials(space, lambda, alpha, split[0], split[1], trials, seed, slack);
        };
      } else if (type == "mean_chain") {
        const auto trials = get_or<std::size_t>(c, "trials", 5);
        pc.run = [&space, &lambda, trials, seed, beta0] {
          return check_mean_chain(space, lambda, trials, seed, beta0);
        };
      } else if (type == "commutator_algebra") {
        const KernelSpec k = kernel_spec_from_json(c.value("kernel", Json::object()));
        const auto trials = get_or<std::size_t>(c, "trials", 20);
        const double tol = get_or(c, "tolerance", 1e-10);
        pc.run = [&space, &lambda, k, trials, seed, tol] {
          return check_commutator_algebra(space, lambda, k, trials, seed, tol);
        };
      } else {
        throw SuiteError("unknown check type '" + type + "'");
      }
    } catch (const SuiteError& e) {
      throw SuiteError(where + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw SuiteError(where + ": " + e.what());
    }
    plan.push_back(std::move(pc));
  }

  SuiteResult result;
  Json entries = Json::array();
  Json timings = Json::object();
  for (auto& pc : plan) {
    const auto start = std::chrono::steady_clock::now();
    VerifyReport rep = pc.run();
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rep.name = pc.name;
    Json entry = rep.to_json();
    entry["type"] = pc.type;
    entries.push_back(std::move(entry));
    timings[pc.name] = rep.wall_seconds;
    result.pass = result.pass && rep.pass;
  }
  result.report["schema_version"] = kSchemaVersion;
  result.report["environment"] = {{"tool", "nhmms"},
                                  {"version", "0.1.0"},
                                  {"threads", thread_count()},
                                  {"wall_seconds", timings}};
  result.report["checks"] = std::move(entries);
  result.report["pass"] = result.pass;
  return result;
}

SuiteResult run_suite_file(const std::filesystem::path& path) {
  Json config;
  try {
    config = read_json(path);
  } catch (const FormatError& e) {
    throw SuiteError(e.what());
  }
  return run_suite(config, path.parent_path());
}

}  // namespace nhmms
