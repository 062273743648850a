#include "nhmms/spacegen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "nhmms/parallel.hpp"

namespace nhmms {

SpaceFamily space_family_from_string(const std::string& s) {
  if (s == "grid") return SpaceFamily::grid;
  if (s == "cantor") return SpaceFamily::cantor;
  if (s == "powerlaw_line") return SpaceFamily::powerlaw_line;
  if (s == "mixed_dimension") return SpaceFamily::mixed_dimension;
  throw std::invalid_argument("unknown space family '" + s + "'");
}

std::string to_string(SpaceFamily f) {
  switch (f) {
    case SpaceFamily::grid: return "grid";
    case SpaceFamily::cantor: return "cantor";
    case SpaceFamily::powerlaw_line: return "powerlaw_line";
    case SpaceFamily::mixed_dimension: return "mixed_dimension";
  }
  return "?";
}

namespace {

using Lattice = std::vector<std::vector<std::int64_t>>;

/// Euclidean space on integer coordinates times `scale`. Equal integer
/// offsets give bit-identical distances, so admissible radii do not
/// split into rounding-level near duplicates.
MetricMeasureSpace lattice_space(const Lattice& pts, double scale, std::vector<double> mass) {
  const std::size_t n = pts.size();
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::int64_t s = 0;
      for (std::size_t c = 0; c < pts[i].size(); ++c) {
        const std::int64_t d = pts[i][c] - pts[j][c];
        s += d * d;
      }
      dist[i * n + j] = dist[j * n + i] = scale * std::sqrt(static_cast<double>(s));
    }
  std::vector<std::vector<double>> coords(n);
  for (std::size_t i = 0; i < n; ++i)
    for (auto v : pts[i]) coords[i].push_back(scale * static_cast<double>(v));
  return MetricMeasureSpace(std::move(dist), std::move(mass), std::move(coords), false);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > kMaxGeneratedAtoms) return r;
    r *= base;
  }
  return r;
}

}  // namespace

double minimal_admissible_scale(const MetricMeasureSpace& space, const DominatingFunction& shape) {
  const auto radii = space.admissible_radii();
  std::vector<double> best(space.size(), 0.0);
  parallel_for(space.size(), [&](std::size_t x) {
    for (double r : radii) best[x] = std::max(best[x], measure(space, Ball{x, r}) / shape.shape(r));
  });
  return *std::max_element(best.begin(), best.end());
}

GeneratedSpace generate(const SpaceSpec& spec) {
  Lattice pts;
  std::vector<double> mass;
  double scale = 1.0;
  DominatingFunction shape = DominatingFunction::power(1.0, 1.0);

  switch (spec.family) {
    case SpaceFamily::grid: {
      require(spec.dim >= 1 && spec.side >= 1, "grid needs dim >= 1 and side >= 1");
      require(spec.spacing > 0.0 && std::isfinite(spec.spacing), "grid spacing must be positive");
      const std::size_t n = ipow(static_cast<std::size_t>(spec.side), spec.dim);
      require(n >= 2 && n <= kMaxGeneratedAtoms, "grid must have between 2 and 4096 atoms");
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::int64_t> p(static_cast<std::size_t>(spec.dim));
        std::size_t rest = i;
        for (int c = spec.dim - 1; c >= 0; --c) {
          p[static_cast<std::size_t>(c)] = static_cast<std::int64_t>(rest % static_cast<std::size_t>(spec.side));
          rest /= static_cast<std::size_t>(spec.side);
        }
        pts.push_back(std::move(p));
      }
      mass.assign(n, 1.0);
      scale = spec.spacing;
      shape = DominatingFunction::power(1.0, spec.dim);
      break;
    }
    case SpaceFamily::cantor: {
      require(spec.level >= 1 && spec.level <= 12, "cantor level must lie in [1, 12]");
      const std::size_t n = std::size_t{1} << spec.level;
      std::int64_t denom = 1;
      for (int i = 0; i < spec.level; ++i) denom *= 3;
      // Left endpoints: sum of 2 * 3^(L - i) over the chosen digits.
      for (std::size_t code = 0; code < n; ++code) {
        std::int64_t a = 0, place = denom;
        for (int i = spec.level - 1; i >= 0; --i) {
          place /= 3;
          if (code >> i & 1u) a += 2 * place;
        }
        pts.push_back({a});
      }
      mass.assign(n, 1.0 / static_cast<double>(n));
      scale = 1.0 / static_cast<double>(denom);
      shape = DominatingFunction::power(1.0, std::log(2.0) / std::log(3.0));
      break;
    }
    case SpaceFamily::powerlaw_line: {
      require(spec.exponent > 0.0 && std::isfinite(spec.exponent), "powerlaw exponent must be positive");
      require(spec.count >= 2 && static_cast<std::size_t>(spec.count) <= kMaxGeneratedAtoms,
              "powerlaw_line count must lie in [2, 4096]");
      const double inv = 1.0 / spec.count;
      for (int i = 0; i < spec.count; ++i) {
        pts.push_back({i});
        mass.push_back(i == 0 ? std::pow(inv, spec.exponent + 1.0)
                              : std::pow(i * inv, spec.exponent) * inv);
      }
      scale = inv;
      shape = DominatingFunction::power(1.0, spec.exponent + 1.0);
      break;
    }
    case SpaceFamily::mixed_dimension: {
      require(spec.side >= 1, "mixed_dimension needs side >= 1");
      const auto s = static_cast<std::int64_t>(spec.side);
      require(static_cast<std::size_t>(s + s * s) <= kMaxGeneratedAtoms,
              "mixed_dimension exceeds 4096 atoms");
      for (std::int64_t t = s; t >= 1; --t) pts.push_back({-t, 0});
      for (std::int64_t i = 0; i < s; ++i)
        for (std::int64_t j = 0; j < s; ++j) pts.push_back({i, j});
      mass.assign(pts.size(), 1.0);
      shape = DominatingFunction::two_power(1.0, 1.0, 2.0);
      break;
    }
  }

  MetricMeasureSpace space = lattice_space(pts, scale, std::move(mass));
  const double C = kScaleInflation * minimal_admissible_scale(space, shape);
  DominatingFunction lambda = shape.family() == LambdaFamily::two_power
                                  ? DominatingFunction::two_power(C, shape.k(), shape.k2())
                                  : DominatingFunction::power(C, shape.k());
  return {std::move(space), std::move(lambda)};
}

}  // namespace nhmms
