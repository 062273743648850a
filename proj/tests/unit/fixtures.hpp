#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "nhmms/calculus.hpp"
#include "nhmms/space.hpp"

namespace fixtures {

using nhmms::DominatingFunction;
using nhmms::MetricMeasureSpace;
using nhmms::SpaceFunction;

/// Points {0, 1, 3} on a line with masses {1, 1, 2}.
inline MetricMeasureSpace e3() {
  return MetricMeasureSpace::from_points({{0.0}, {1.0}, {3.0}}, {1.0, 1.0, 2.0});
}

inline DominatingFunction e3_lambda() { return DominatingFunction::power(4.0, 1.0); }

/// n unit-spaced collinear points with unit masses.
inline MetricMeasureSpace line(std::size_t n) {
  std::vector<std::vector<double>> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({static_cast<double>(i)});
  return MetricMeasureSpace::from_points(pts, std::vector<double>(n, 1.0));
}

inline std::vector<double> normals(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> v(n);
  for (double& x : v) x = nd(rng);
  return v;
}

inline SpaceFunction random_function(const MetricMeasureSpace& s, std::uint64_t seed) {
  return {s, normals(s.size(), seed)};
}

inline double max_abs_diff(const SpaceFunction& a, const SpaceFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

inline double sup_abs(const SpaceFunction& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace fixtures
