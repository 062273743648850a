#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nhmms/harness.hpp"
#include "nhmms/io.hpp"
#include "nhmms/maximal.hpp"
#include "nhmms/operators.hpp"
#include "nhmms/parallel.hpp"
#include "nhmms/spacegen.hpp"

namespace {

using namespace nhmms;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

/// Raised for bad flag combinations found after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const Json& doc, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << dump_json(doc);
  else
    write_json(out, doc);
}

std::vector<SpaceFunction> load_functions(const std::vector<std::string>& paths,
                                          const MetricMeasureSpace& space) {
  std::vector<SpaceFunction> fs;
  for (const auto& p : paths) fs.push_back(load_function(p, space));
  return fs;
}

void expect_count(const std::vector<std::string>& v, std::size_t n, const std::string& flag,
                  const std::string& op) {
  if (v.size() != n)
    throw UsageError("--op " + op + " needs " + std::to_string(n) + " " + flag + " file(s), got " +
                     std::to_string(v.size()));
}

struct KernelFlags {
  std::string family = "standard";
  double C_size = 1.0;
  double delta = 1.0;
  std::optional<double> C_smooth;

  void add(CLI::App* app) {
    app->add_option("--kernel", family, "Kernel family")->capture_default_str();
    app->add_option("--kernel-c-size", C_size, "Declared size constant")->capture_default_str();
    app->add_option("--kernel-delta", delta, "Declared smoothness exponent")->capture_default_str();
    app->add_option("--kernel-c-smooth", C_smooth, "Declared smoothness constant (default: measure only)");
  }
  [[nodiscard]] KernelSpec spec(std::size_t m, double alpha) const {
    KernelSpec k;
    k.family = family;
    k.m = m;
    k.alpha = alpha;
    k.C_size = C_size;
    k.delta = delta;
    k.C_smooth = C_smooth;
    k.validate();
    return k;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite non-homogeneous metric measure spaces: fractional integrals, "
               "commutators, RBMO and maximal operators"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = hardware count)")->capture_default_str();

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a space file");
  std::string gen_family = "grid";
  std::string gen_out;
  SpaceSpec spec;
  gen->add_option("--family", gen_family, "grid | cantor | powerlaw_line | mixed_dimension")
      ->capture_default_str();
  gen->add_option("--dim", spec.dim, "Grid dimension")->capture_default_str();
  gen->add_option("--side", spec.side, "Grid side / mixed_dimension side")->capture_default_str();
  gen->add_option("--spacing", spec.spacing, "Grid spacing")->capture_default_str();
  gen->add_option("--level", spec.level, "Cantor level")->capture_default_str();
  gen->add_option("--exponent", spec.exponent, "Power-law mass exponent")->capture_default_str();
  gen->add_option("--count", spec.count, "Power-law point count")->capture_default_str();
  gen->add_option("--out", gen_out, "Output space file (default stdout)");

  // check
  auto* check = app.add_subcommand("check", "Upper-doubling report of a space file");
  std::string check_space, check_out;
  DoublingCheckOptions check_opts;
  std::optional<double> check_beta0;
  check->add_option("--space", check_space, "Space file")->required();
  check->add_option("--epsilon", check_opts.epsilon, "Weak-growth epsilon")->capture_default_str();
  check->add_option("--samples", check_opts.weak_growth_samples, "Weak-growth samples")
      ->capture_default_str();
  check->add_option("--seed", check_opts.seed, "Sampling seed")->capture_default_str();
  check->add_option("--beta0", check_beta0, "Doubling constant (default from the space)");
  check->add_option("--out", check_out, "Output report (default stdout)");

  // apply
  auto* apply = app.add_subcommand("apply", "Apply an operator to function files");
  std::string apply_op, apply_space, apply_out;
  std::vector<std::string> apply_f, apply_b;
  double apply_alpha = 0.5;
  KernelFlags apply_kernel;
  apply->add_option("--op", apply_op,
                    "talpha | talpha-centered | ialpha2 | ialpham | comm1 | comm2 | comm12 | commN")
      ->required()
      ->check(CLI::IsMember({"talpha", "talpha-centered", "ialpha2", "ialpham", "comm1", "comm2",
                             "comm12", "commN"}));
  apply->add_option("--space", apply_space, "Space file")->required();
  apply->add_option("--f", apply_f, "Function file (repeat per slot)")->required();
  apply->add_option("--b", apply_b, "Symbol file (repeat per slot)");
  apply->add_option("--alpha", apply_alpha, "Order alpha")->capture_default_str();
  apply->add_option("--out", apply_out, "Output function file (default stdout)");
  apply_kernel.add(apply);

  // norm
  auto* norm = app.add_subcommand("norm", "L^p or RBMO norm of a function file");
  std::string norm_kind, norm_space, norm_f;
  double norm_p = 2.0, norm_rho = 6.0;
  std::optional<double> norm_beta0;
  norm->add_option("--kind", norm_kind, "lp | rbmo")->required()->check(CLI::IsMember({"lp", "rbmo"}));
  norm->add_option("--space", norm_space, "Space file")->required();
  norm->add_option("--f", norm_f, "Function file")->required();
  norm->add_option("--p", norm_p, "Exponent (inf allowed for lp; oscillation exponent for rbmo)")
      ->capture_default_str();
  norm->add_option("--rho", norm_rho, "RBMO dilation")->capture_default_str();
  norm->add_option("--beta0", norm_beta0, "Doubling constant (default from the space)");

  // maximal
  auto* maximal = app.add_subcommand("maximal", "Maximal operators");
  std::string max_op, max_space, max_f, max_out;
  double max_beta = 0.0, max_r = 1.0, max_rho = 5.0, max_alpha = 0.0;
  std::optional<double> max_beta0;
  maximal->add_option("--op", max_op, "msharp | ndoubling | mfrac")
      ->required()
      ->check(CLI::IsMember({"msharp", "ndoubling", "mfrac"}));
  maximal->add_option("--space", max_space, "Space file")->required();
  maximal->add_option("--f", max_f, "Function file")->required();
  maximal->add_option("--beta", max_beta, "Sharp maximal exponent beta")->capture_default_str();
  maximal->add_option("--beta0", max_beta0, "Doubling constant (default from the space)");
  maximal->add_option("--r", max_r, "mfrac exponent r")->capture_default_str();
  maximal->add_option("--rho", max_rho, "mfrac dilation rho")->capture_default_str();
  maximal->add_option("--alpha", max_alpha, "mfrac order alpha")->capture_default_str();
  maximal->add_option("--out", max_out, "Output function file (default stdout)");

  // kcoef
  auto* kcoef = app.add_subcommand("kcoef", "K coefficient of two nested balls");
  std::string k_space;
  Index k_center = 0, k_outer_center = 0;
  double k_radius = 0.0, k_outer_radius = 0.0, k_gamma = 0.0;
  kcoef->add_option("--space", k_space, "Space file")->required();
  kcoef->add_option("--center", k_center, "Inner ball center")->required();
  kcoef->add_option("--radius", k_radius, "Inner ball radius")->required();
  kcoef->add_option("--outer-center", k_outer_center, "Outer ball center")->required();
  kcoef->add_option("--outer-radius", k_outer_radius, "Outer ball radius")->required();
  kcoef->add_option("--gamma", k_gamma, "Exponent gamma in [0, 1)")->capture_default_str();

  // verify
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  std::string suite_path, suite_out;
  verify->add_option("--suite", suite_path, "Suite config (JSON)")->required();
  verify->add_option("--out", suite_out, "Report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return kExitUsage;
  }

  if (const char* env = std::getenv("NHMMS_THREADS")) {
    try {
      threads = std::stoul(env);
    } catch (const std::exception&) {
      std::cerr << "NHMMS_THREADS must be a non-negative integer\n";
      return kExitUsage;
    }
  }
  set_thread_count(threads);

  try {
    if (*gen) {
      spec.family = space_family_from_string(gen_family);
      const auto g = generate(spec);
      emit(space_to_json(g.space, g.lambda), gen_out);
      return kExitOk;
    }
    if (*check) {
      const auto sf = load_space(check_space);
      check_opts.beta0 = check_beta0;
      const auto r = check_upper_doubling(sf.space, sf.lambda, check_opts);
      emit(to_json(r), check_out);
      return r.pass() ? kExitOk : kExitCheckFailed;
    }
    if (*apply) {
      const auto sf = load_space(apply_space);
      const auto& space = sf.space;
      const auto fs = load_functions(apply_f, space);
      const auto bs = load_functions(apply_b, space);
      std::optional<SpaceFunction> out;
      if (apply_op == "talpha" || apply_op == "talpha-centered") {
        expect_count(apply_f, 1, "--f", apply_op);
        out = apply_op == "talpha" ? fractional_integral(space, sf.lambda, apply_alpha, fs[0])
                                   : fractional_integral_centered(space, sf.lambda, apply_alpha, fs[0]);
      } else if (apply_op == "ialpha2" || apply_op == "ialpham") {
        if (apply_op == "ialpha2") expect_count(apply_f, 2, "--f", apply_op);
        out = multilinear_fractional_integral(space, sf.lambda,
                                              apply_kernel.spec(fs.size(), apply_alpha), fs);
      } else if (apply_op == "comm1" || apply_op == "comm2") {
        expect_count(apply_f, 2, "--f", apply_op);
        expect_count(apply_b, 1, "--b", apply_op);
        out = single_commutator(space, sf.lambda, apply_kernel.spec(2, apply_alpha),
                                apply_op == "comm1" ? 1 : 2, bs[0], fs[0], fs[1]);
      } else {
        if (apply_op == "comm12") {
          expect_count(apply_f, 2, "--f", apply_op);
          expect_count(apply_b, 2, "--b", apply_op);
        } else if (apply_b.size() != apply_f.size()) {
          throw UsageError("--op commN needs one --b per --f");
        }
        out = commutator(space, sf.lambda, apply_kernel.spec(fs.size(), apply_alpha), bs, fs);
      }
      emit(function_to_json(*out), apply_out);
      return kExitOk;
    }
    if (*norm) {
      const auto sf = load_space(norm_space);
      const auto f = load_function(norm_f, sf.space);
      const double v = norm_kind == "lp"
                           ? lp_norm(sf.space, f, norm_p)
                           : rbmo_norm(sf.space, sf.lambda, f, norm_rho, norm_p, norm_beta0);
      std::cout << format_number(v) << "\n";
      return kExitOk;
    }
    if (*maximal) {
      const auto sf = load_space(max_space);
      const auto f = load_function(max_f, sf.space);
      const double beta0 = max_beta0.value_or(default_beta0(sf.space, sf.lambda));
      SpaceFunction out =
          max_op == "msharp"      ? sharp_maximal(sf.space, sf.lambda, f, max_beta, beta0)
          : max_op == "ndoubling" ? doubling_maximal(sf.space, f, beta0)
                                  : fractional_maximal(sf.space, f, max_r, max_rho, max_alpha);
      emit(function_to_json(out), max_out);
      return kExitOk;
    }
    if (*kcoef) {
      const auto sf = load_space(k_space);
      sf.space.check_index(k_center);
      sf.space.check_index(k_outer_center);
      const double v = k_coefficient(sf.space, sf.lambda, Ball{k_center, k_radius},
                                     Ball{k_outer_center, k_outer_radius}, k_gamma);
      std::cout << format_number(v) << "\n";
      return kExitOk;
    }
    if (*verify) {
      const auto result = run_suite_file(suite_path);
      emit(result.report, suite_out);
      return result.pass ? kExitOk : kExitCheckFailed;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
