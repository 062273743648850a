#include <doctest.h>

#include "fixtures.hpp"
#include "nhmms/harness.hpp"
#include "nhmms/parallel.hpp"

using namespace nhmms;
using fixtures::e3;
using fixtures::e3_lambda;

namespace {

KernelSpec bilinear(double alpha) {
  KernelSpec k;
  k.alpha = alpha;
  return k;
}

struct ThreadGuard {
  std::size_t saved = thread_count();
  ~ThreadGuard() { set_thread_count(saved); }
};

}  // namespace

TEST_CASE("exponent configuration") {
  const auto e = ExponentConfig::make(3, 3, 0.4);
  CHECK(e.q == doctest::Approx(3.75).epsilon(1e-14));
  CHECK(e.r == 2.0);
  CHECK(ExponentConfig::make(3, 3, 0.4, 1.5).r == 1.5);
  CHECK(ExponentConfig::make(2, 2, 0.9).q == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(ExponentConfig::make(1.5, 1.5, 0.8).r == doctest::Approx(1.4375).epsilon(1e-12));
  CHECK_THROWS_AS(ExponentConfig::make(2, 2, 1.0), std::invalid_argument);  // q infinite
  CHECK_THROWS_AS(ExponentConfig::make(3, 3, 0.4, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(ExponentConfig::make(1, 3, 0.4), std::invalid_argument);
}

TEST_CASE("summary statistics split the trials in halves") {
  VerifyReport r;
  r.ratios = {1.0, NAN, 3.0, 2.0};
  r.summarize();
  CHECK(r.sup_first_half == 1.0);
  CHECK(r.sup_second_half == 3.0);
  CHECK(r.sup == 3.0);
  CHECK_FALSE(r.degenerate);
  r.ratios = {NAN, NAN};
  r.summarize();
  CHECK(r.degenerate);
  CHECK(r.to_json().dump().find("wall") == std::string::npos);
}

TEST_CASE("norm ratio on delta inputs reproduces the hand value") {
  const auto s = e3();
  const auto lam = e3_lambda();
  const auto exps = ExponentConfig::make(3, 3, 0.5);
  NormOptions o;
  o.centered = false;
  o.source = [](std::size_t, std::mt19937_64&) {
    return TrialInput{{0, 1, 0}, {0, 0, 1}, {}, {}};
  };
  const auto r = estimate_operator_norm(s, lam, bilinear(0.5), exps, NormTarget::ialpha2, 4, 1, o);
  const double want = (1.0 / 32.0) / std::cbrt(2.0);
  for (double v : r.ratios) CHECK(v == doctest::Approx(want).epsilon(1e-14));
  CHECK(r.pass);

  // Centered output: values 3/128, -1/128, -1/128 with masses 1, 1, 2, q = 6.
  o.centered = true;
  const auto c = estimate_operator_norm(s, lam, bilinear(0.5), exps, NormTarget::ialpha2, 2, 1, o);
  const double lq = std::pow(std::pow(3.0 / 128, 6) + 3 * std::pow(1.0 / 128, 6), 1.0 / 6.0);
  CHECK(c.ratios[0] == doctest::Approx(lq / std::cbrt(2.0)).epsilon(1e-13));
}

TEST_CASE("degenerate trials are skipped") {
  const auto s = e3();
  NormOptions o;
  o.source = [](std::size_t, std::mt19937_64&) { return TrialInput{{0, 0, 0}, {1, 1, 1}, {}, {}}; };
  const auto r = estimate_operator_norm(s, e3_lambda(), bilinear(0.4), ExponentConfig::make(3, 3, 0.4),
                                        NormTarget::ialpha2, 4, 1, o);
  CHECK(r.degenerate);
  CHECK_FALSE(r.pass);
  for (double v : r.ratios) CHECK(std::isnan(v));
}

TEST_CASE("operator norm reports do not depend on the thread count") {
  ThreadGuard guard;
  const auto g = generate({SpaceFamily::cantor, 1, 4, 1.0, 3});
  const auto exps = ExponentConfig::make(3, 3, 0.4);
  std::string first;
  for (std::size_t threads : {1, 3, 8}) {
    set_thread_count(threads);
    const auto r = estimate_operator_norm(g.space, g.lambda, bilinear(0.4), exps, NormTarget::comm12, 6, 42);
    const auto text = dump_json(r.to_json());
    if (first.empty()) first = text;
    CHECK(text == first);
  }
  const auto other = estimate_operator_norm(g.space, g.lambda, bilinear(0.4), exps, NormTarget::comm12, 6, 43);
  CHECK(dump_json(other.to_json()) != first);
}

TEST_CASE("every norm target runs") {
  const auto g = generate({SpaceFamily::grid, 1, 8});
  const auto exps = ExponentConfig::make(3, 3, 0.4);
  for (auto t : {NormTarget::ialpha2, NormTarget::comm12, NormTarget::comm1, NormTarget::comm2, NormTarget::talpha}) {
    const auto r = estimate_operator_norm(g.space, g.lambda, bilinear(0.4), exps, t, 4, 7);
    INFO(to_string(t));
    CHECK(r.trials == 4);
    CHECK(r.sup > 0.0);
    CHECK(std::isfinite(r.sup));
    CHECK(norm_target_from_string(to_string(t)) == t);
  }
  CHECK_THROWS_AS(norm_target_from_string("nope"), std::invalid_argument);
}

TEST_CASE("pointwise sharp-maximal constants") {
  const auto g = generate({SpaceFamily::cantor, 1, 4, 1.0, 3});
  const auto& s = g.space;
  const auto exps = ExponentConfig::make(3, 3, 0.4);
  const auto b1 = fixtures::random_function(s, 1), b2 = fixtures::random_function(s, 2);
  const auto f1 = fixtures::random_function(s, 3), f2 = fixtures::random_function(s, 4);

  const auto r = check_sharp_constants(s, g.lambda, bilinear(0.4), exps, b1, b2, f1, f2);
  CHECK(r.pass);
  CHECK(r.ratios.size() == s.size());
  for (double v : r.ratios) {
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
  }

  // Zero input: every left side vanishes.
  const auto z = check_sharp_constants(s, g.lambda, bilinear(0.4), exps, b1, b2, SpaceFunction::zeros(s), f2);
  CHECK(z.pass);
  for (double v : z.ratios) CHECK(v == 0.0);

  // A constant symbol kills the first-slot commutator.
  const auto c = check_sharp_constants(s, g.lambda, bilinear(0.4), exps, SpaceFunction::constant(s, 2.0), b2, f1, f2);
  CHECK(c.pass);
  CHECK(c.metadata["max_C_slot1"].get<double>() == 0.0);

  const auto t = sharp_constant_trials(s, g.lambda, bilinear(0.4), exps, 3, 5);
  CHECK(t.pass);
  CHECK(t.ratios.size() == 3);
}

TEST_CASE("doubling-maximal versus sharp-maximal ratio") {
  const auto g = generate({SpaceFamily::grid, 1, 12});
  const auto& s = g.space;
  CHECK(check_maximal_ratio(s, g.lambda, SpaceFunction::constant(s, 3.0), 2.0, 0.5).degenerate);
  const auto f = fixtures::random_function(s, 8);
  const auto a = check_maximal_ratio(s, g.lambda, f, 2.0, 0.5);
  const auto b = check_maximal_ratio(s, g.lambda, f.scaled(-4.0).shifted(9.0), 2.0, 0.5);
  REQUIRE(a.ratios.size() == 1);
  CHECK(std::isfinite(a.ratios[0]));
  CHECK(a.ratios[0] == doctest::Approx(b.ratios[0]).epsilon(1e-12));
}

TEST_CASE("product bound") {
  const auto s = e3();
  const auto lam = e3_lambda();
  const auto r = check_product_bound(s, lam, 0.5, 0.25, 0.25, SpaceFunction(s, {1, -2, 0.5}), SpaceFunction(s, {3, 1, -1}));
  CHECK(r.pass);
  for (double v : r.ratios) CHECK(v <= 1.0 + 1e-12);
  const auto z = check_product_bound(s, lam, 0.5, 0.25, 0.25, SpaceFunction::zeros(s), SpaceFunction(s, {3, 1, -1}));
  CHECK(z.pass);
  CHECK_THROWS_AS(check_product_bound(s, lam, 0.5, 0.2, 0.2, SpaceFunction::zeros(s), SpaceFunction::zeros(s)),
                  std::invalid_argument);
  const auto g = generate({SpaceFamily::grid, 1, 8});
  CHECK(product_bound_trials(g.space, g.lambda, 0.3, 0.15, 0.15, 20, 3).pass);
}

TEST_CASE("mean differences along doubling chains") {
  const auto g = generate({SpaceFamily::grid, 1, 10});
  const auto r = check_mean_chain(g.space, g.lambda, 3, 2);
  CHECK(r.pass);
  CHECK(r.ratios.size() == 3);
  CHECK(r.metadata["max_by_j"].size() == 5);
}

TEST_CASE("commutator algebra report") {
  const auto g = generate({SpaceFamily::grid, 1, 8});
  const auto r = check_commutator_algebra(g.space, g.lambda, bilinear(0.4), 5, 1);
  CHECK(r.pass);
  for (double v : r.ratios) CHECK(v <= 1e-10);
}

TEST_CASE("suite runner") {
  const Json empty = Json::parse(R"({"seed": 1, "spaces": {}, "checks": []})");
  const auto e = run_suite(empty);
  CHECK(e.pass);
  CHECK(e.report["checks"].empty());
  CHECK(e.report["schema_version"] == 1);

  const Json cfg = Json::parse(R"({
    "seed": 3,
    "spaces": {"g8": {"gen": {"family": "grid", "dim": 1, "side": 8}}},
    "checks": [
      {"type": "product_bound", "space": "g8", "alpha": 0.5, "trials": 10},
      {"type": "upper_doubling", "space": "g8", "samples": 200},
      {"type": "commutator_algebra", "space": "g8", "trials": 3}
    ]})");
  ThreadGuard guard;
  set_thread_count(1);
  const auto a = run_suite(cfg);
  set_thread_count(4);
  const auto b = run_suite(cfg);
  CHECK(a.pass);
  CHECK(a.report["checks"].size() == 3);
  CHECK(dump_json(a.report["checks"]) == dump_json(b.report["checks"]));

  const Json bad = Json::parse(R"({
    "spaces": {"g8": {"gen": {"family": "grid", "side": 8}}},
    "checks": [{"type": "kernel", "space": "g8", "kernel": {"family": "standard_x10"}}]})");
  CHECK_FALSE(run_suite(bad).pass);

  CHECK_THROWS_AS(run_suite(Json::parse(R"({"spaces": {}, "checks": [{"type": "kernel", "space": "x"}]})")),
                  SuiteError);
  CHECK_THROWS_AS(run_suite(Json::parse(R"({"spaces": {"g": {"gen": {"family": "grid", "side": 4}}},
                                          "checks": [{"type": "warp", "space": "g"}]})")),
                  SuiteError);
  CHECK_THROWS_AS(run_suite_file("/nonexistent/suite.json"), std::exception);
}
