#pragma once

#include <string>

#include "nhmms/space.hpp"

namespace nhmms {

enum class SpaceFamily { grid, cantor, powerlaw_line, mixed_dimension };

SpaceFamily space_family_from_string(const std::string& s);
std::string to_string(SpaceFamily f);

/// Generator parameters. Fields not used by a family are ignored.
struct SpaceSpec {
  SpaceFamily family = SpaceFamily::grid;
  int dim = 1;           // grid
  int side = 4;          // grid side count, mixed_dimension segment/grid side
  double spacing = 1.0;  // grid
  int level = 3;         // cantor
  double exponent = 1.0; // powerlaw_line mass exponent a
  int count = 16;        // powerlaw_line point count
};

struct GeneratedSpace {
  MetricMeasureSpace space;
  DominatingFunction lambda;
};

/// Upper bound on generated atom counts.
inline constexpr std::size_t kMaxGeneratedAtoms = 4096;

/// Scale inflation applied to the exhaustive sup of mu(B) / shape(r).
inline constexpr double kScaleInflation = 1.05;

/// Builds the space and a matching dominating function whose scale is
/// kScaleInflation times the smallest admissible one.
GeneratedSpace generate(const SpaceSpec& spec);

/// sup over centers and admissible radii of mu(B(x, r)) / shape(r).
double minimal_admissible_scale(const MetricMeasureSpace& space, const DominatingFunction& shape);

}  // namespace nhmms
