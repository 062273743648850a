#include <doctest.h>

#include "fixtures.hpp"
#include "nhmms/kernel.hpp"
#include "nhmms/operators.hpp"
#include "nhmms/spacegen.hpp"
#include "oracles.hpp"

using namespace nhmms;
using fixtures::e3;
using fixtures::e3_lambda;
using fixtures::max_abs_diff;
using fixtures::sup_abs;

namespace {

KernelSpec bilinear(double alpha) {
  KernelSpec k;
  k.m = 2;
  k.alpha = alpha;
  return k;
}

SpaceFunction as_function(const MetricMeasureSpace& s, const std::vector<double>& v) { return {s, v}; }

std::vector<double> vec(const SpaceFunction& f) { return {f.values().begin(), f.values().end()}; }

}  // namespace

TEST_CASE("standard kernel hand value and symmetry") {
  const auto s = e3();
  const auto lam = e3_lambda();
  const auto k = bilinear(0.5);
  const Index ys[] = {1, 2};
  const Index swapped[] = {2, 1};
  CHECK(kernel_eval(s, lam, k, 0, ys) == doctest::Approx(1.0 / 64.0).epsilon(1e-15));
  CHECK(kernel_eval(s, lam, k, 0, ys) == kernel_eval(s, lam, k, 0, swapped));
  CHECK(kernel_eval(s, lam, k, 0, ys) == std::pow(lambda_sum(s, lam, 0, ys), -1.5));
  const Index diag[] = {0, 0};
  CHECK_THROWS_AS(kernel_eval(s, lam, k, 0, diag), std::domain_error);
  const Index one[] = {1};
  CHECK_THROWS_AS(kernel_eval(s, lam, k, 0, one), BindingError);
}

TEST_CASE("kernel spec validation") {
  KernelSpec k;
  k.alpha = 2.0;
  CHECK_THROWS_AS(k.validate(), std::invalid_argument);
  k.alpha = 0.5;
  k.delta = 0.0;
  CHECK_THROWS_AS(k.validate(), std::invalid_argument);
  k.delta = 1.0;
  k.family = "nope";
  CHECK_FALSE(kernel_registered("nope"));
  CHECK_THROWS(k.validate());
}

TEST_CASE("kernel condition checks") {
  const auto s = e3();
  const auto lam = e3_lambda();
  auto k = bilinear(0.5);
  const auto r = check_kernel(s, lam, k);
  CHECK(r.size_pass);
  CHECK(r.size_measured == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::isfinite(r.smooth_x_measured));
  CHECK(r.smooth_y_measured.size() == 2);
  CHECK(r.pass());

  // Declared smoothness constants are checked against the measured ones.
  k.C_smooth = 1.0;
  CHECK_FALSE(check_kernel(s, lam, k).smooth_pass);
  k.C_smooth = 2.0 * std::max({r.smooth_x_measured, r.smooth_y_measured[0], r.smooth_y_measured[1]});
  CHECK(check_kernel(s, lam, k).pass());
  k.C_smooth.reset();

  k.family = "standard_x10";
  const auto bad = check_kernel(s, lam, k);
  CHECK_FALSE(bad.size_pass);
  CHECK(bad.size_measured == doctest::Approx(10.0).epsilon(1e-14));

  const auto g = generate({SpaceFamily::cantor, 1, 4, 1.0, 4});
  CHECK(check_kernel(g.space, g.lambda, bilinear(0.4)).pass());
}

TEST_CASE("fractional integral hand values and linearity") {
  const auto s = e3();
  const auto lam = e3_lambda();
  const auto Tf = fractional_integral(s, lam, 0.5, SpaceFunction::delta(s, 1));
  CHECK(Tf[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(Tf[1] == 0.0);
  CHECK(sup_abs(fractional_integral(s, lam, 0.5, SpaceFunction::zeros(s))) == 0.0);

  const auto line = fixtures::line(9);
  const auto lam9 = DominatingFunction::per_point_power({4, 5, 4, 6, 4, 4, 5, 4, 4}, 1.0);
  const auto f = fixtures::random_function(line, 1);
  const auto g = fixtures::random_function(line, 2);
  const auto lhs = fractional_integral(line, lam9, 0.3, f.scaled(2.5) + g);
  const auto rhs = fractional_integral(line, lam9, 0.3, f).scaled(2.5) + fractional_integral(line, lam9, 0.3, g);
  CHECK(max_abs_diff(lhs, rhs) <= 1e-12 * sup_abs(rhs));

  CHECK(max_abs_diff(fractional_integral(line, lam9, 0.3, f), as_function(line, oracle::T(line, lam9, 0.3, vec(f), false))) <=
        1e-12 * sup_abs(f));
  CHECK(max_abs_diff(fractional_integral_centered(line, lam9, 0.3, f),
                     as_function(line, oracle::T(line, lam9, 0.3, vec(f), true))) <= 1e-12 * sup_abs(f));
  CHECK_THROWS_AS(fractional_integral(s, lam, 1.0, SpaceFunction::zeros(s)), std::invalid_argument);
}

TEST_CASE("bilinear fractional integral") {
  const auto s = e3();
  const auto lam = e3_lambda();
  const auto k = bilinear(0.5);
  const SpaceFunction fs[] = {SpaceFunction::delta(s, 1), SpaceFunction::delta(s, 2)};
  const auto I = multilinear_fractional_integral(s, lam, k, fs);
  CHECK(I[0] == doctest::Approx(1.0 / 32.0).epsilon(1e-15));
  CHECK(I[1] == 0.0);  // y1 = x excluded
  const SpaceFunction zero[] = {SpaceFunction::zeros(s), SpaceFunction::delta(s, 2)};
  CHECK(sup_abs(multilinear_fractional_integral(s, lam, k, zero)) == 0.0);
  const SpaceFunction three[] = {fs[0], fs[1], fs[1]};
  CHECK_THROWS_AS(multilinear_fractional_integral(s, lam, k, three), BindingError);

  const auto g = generate({SpaceFamily::cantor, 1, 4, 1.0, 3});
  const auto f1 = fixtures::random_function(g.space, 3);
  const auto f2 = fixtures::random_function(g.space, 4);
  const SpaceFunction a[] = {f1, f2};
  const SpaceFunction b[] = {f1.scaled(2.0), f2};
  const auto Ia = multilinear_fractional_integral(g.space, g.lambda, bilinear(0.4), a);
  const auto Ib = multilinear_fractional_integral(g.space, g.lambda, bilinear(0.4), b);
  CHECK(max_abs_diff(Ib, Ia.scaled(2.0)) <= 1e-12 * sup_abs(Ib));
  CHECK(max_abs_diff(Ia, as_function(g.space, oracle::I2(g.space, g.lambda, 0.4, vec(f1), vec(f2)))) <=
        1e-12 * sup_abs(Ia));
}

TEST_CASE("trilinear kernel against a direct triple sum") {
  const auto s = fixtures::line(5);
  const auto lam = DominatingFunction::power(4.0, 1.0);
  KernelSpec k;
  k.m = 3;
  k.alpha = 1.2;
  std::vector<SpaceFunction> fs;
  for (std::uint64_t i = 0; i < 3; ++i) fs.push_back(fixtures::random_function(s, 20 + i));
  const auto got = multilinear_fractional_integral(s, lam, k, fs);
  for (Index x = 0; x < s.size(); ++x) {
    double want = 0.0;
    for (Index a = 0; a < 5; ++a)
      for (Index b = 0; b < 5; ++b)
        for (Index c = 0; c < 5; ++c) {
          if (a == x || b == x || c == x) continue;
          const double sum = lam(x, s.distance(x, a)) + lam(x, s.distance(x, b)) + lam(x, s.distance(x, c));
          want += std::pow(sum, -(3.0 - 1.2)) * fs[0][a] * fs[1][b] * fs[2][c];
        }
    CHECK(got[x] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("commutator forms agree") {
  const auto s = e3();
  const auto lam = e3_lambda();
  const auto k = bilinear(0.5);
  const SpaceFunction b(s, {0, 1, 0});
  const SpaceFunction bs[] = {b, b};
  const SpaceFunction fs[] = {SpaceFunction::delta(s, 1), SpaceFunction::delta(s, 2)};
  const auto subset = commutator(s, lam, k, bs, fs);
  const auto want = oracle::commutator2(s, lam, 0.5, vec(b), vec(b), vec(fs[0]), vec(fs[1]));
  for (Index x = 0; x < 3; ++x) CHECK(subset[x] == doctest::Approx(want[x]).epsilon(1e-12));
  const auto four = commutator_bilinear(s, lam, k, b, b, fs[0], fs[1]);
  CHECK(max_abs_diff(subset, four) <= 1e-12 * std::max(1e-300, sup_abs(four)));

  const auto slot1 = single_commutator(s, lam, k, 1, b, fs[0], fs[1]);
  const auto want1 = oracle::commutator_slot1(s, lam, 0.5, vec(b), vec(fs[0]), vec(fs[1]));
  for (Index x = 0; x < 3; ++x) CHECK(slot1[x] == doctest::Approx(want1[x]).epsilon(1e-12));
}

TEST_CASE("commutators on random data") {
  const auto g = generate({SpaceFamily::grid, 1, 10});
  const auto& s = g.space;
  const auto k = bilinear(0.4);
  const auto b1 = fixtures::random_function(s, 1), b2 = fixtures::random_function(s, 2);
  const auto f1 = fixtures::random_function(s, 3), f2 = fixtures::random_function(s, 4);
  const SpaceFunction bs[] = {b1, b2};
  const SpaceFunction fs[] = {f1, f2};
  const SpaceFunction* ptrs[] = {&b1, &b2};

  const auto oracle_vals = as_function(s, oracle::commutator2(s, g.lambda, 0.4, vec(b1), vec(b2), vec(f1), vec(f2)));
  const double scale = sup_abs(oracle_vals);
  CHECK(max_abs_diff(commutator(s, g.lambda, k, bs, fs), oracle_vals) <= 1e-10 * scale);
  CHECK(max_abs_diff(commutator_bilinear(s, g.lambda, k, b1, b2, f1, f2), oracle_vals) <= 1e-10 * scale);
  CHECK(max_abs_diff(commutator_kernel_form(s, g.lambda, k, ptrs, fs), oracle_vals) <= 1e-12 * scale);

  // Constant symbols.
  const SpaceFunction cs[] = {SpaceFunction::constant(s, 2.0), SpaceFunction::constant(s, -1.5)};
  CHECK(sup_abs(commutator(s, g.lambda, k, cs, fs)) <= 1e-12 * scale);
  CHECK(sup_abs(single_commutator(s, g.lambda, k, 1, cs[0], f1, f2)) <= 1e-12 * scale);

  // Slot symmetry of the symmetric kernel.
  const SpaceFunction* first[] = {&b1, nullptr};
  const auto s1 = single_commutator(s, g.lambda, k, 1, b1, f1, f2);
  const auto s2 = single_commutator(s, g.lambda, k, 2, b1, f2, f1);
  CHECK(max_abs_diff(s1, s2) <= 1e-12 * sup_abs(s1));
  CHECK(max_abs_diff(s1, commutator_kernel_form(s, g.lambda, k, first, fs)) <= 1e-10 * sup_abs(s1));
  CHECK(max_abs_diff(single_commutator(s, g.lambda, k, 2, b2, f1, f2),
                     as_function(s, oracle::commutator_slot2(s, g.lambda, 0.4, vec(b2), vec(f1), vec(f2)))) <=
        1e-10 * sup_abs(s1));
  CHECK_THROWS_AS(single_commutator(s, g.lambda, k, 3, b1, f1, f2), std::invalid_argument);
}

TEST_CASE("trilinear commutator subset sum against the difference form") {
  const auto s = fixtures::line(5);
  const auto lam = DominatingFunction::power(4.0, 1.0);
  KernelSpec k;
  k.m = 3;
  k.alpha = 1.0;
  std::vector<SpaceFunction> bs, fs;
  for (std::uint64_t i = 0; i < 3; ++i) {
    bs.push_back(fixtures::random_function(s, 40 + i));
    fs.push_back(fixtures::random_function(s, 50 + i));
  }
  const SpaceFunction* ptrs[] = {&bs[0], &bs[1], &bs[2]};
  const auto a = commutator(s, lam, k, bs, fs);
  const auto b = commutator_kernel_form(s, lam, k, ptrs, fs);
  CHECK(max_abs_diff(a, b) <= 1e-10 * sup_abs(b));
}
