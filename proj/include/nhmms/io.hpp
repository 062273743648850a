#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "nhmms/calculus.hpp"
#include "nhmms/space.hpp"

namespace nhmms {

using Json = nlohmann::json;

/// Raised for unreadable or malformed input files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpaceFile {
  MetricMeasureSpace space;
  DominatingFunction lambda;
};

/// {"version":1, "points":[[..]]?, "distance_matrix":[[..]]?, "masses":[..],
///  "lambda":{"family":..., "C":..., "k":..., "m":..., "C_lambda":..., "C_tilde":...}}
///
/// The distance matrix wins when both are present; it must then agree
/// with the Euclidean distances of the points to 1e-12 relative.
SpaceFile parse_space(const Json& doc);
SpaceFile load_space(const std::filesystem::path& path);
Json space_to_json(const MetricMeasureSpace& space, const DominatingFunction& lambda);

Json lambda_to_json(const DominatingFunction& lambda);
DominatingFunction lambda_from_json(const Json& doc, const MetricMeasureSpace& space);

/// {"space_hash": "...", "values": [..]}; the hash must match the space.
SpaceFunction parse_function(const Json& doc, const MetricMeasureSpace& space);
SpaceFunction load_function(const std::filesystem::path& path, const MetricMeasureSpace& space);
Json function_to_json(const SpaceFunction& f);

Json read_json(const std::filesystem::path& path);

/// Pretty JSON with every floating-point number at 17 significant digits.
std::string dump_json(const Json& doc);
void write_json(const std::filesystem::path& path, const Json& doc);

/// %.17g
std::string format_number(double v);

}  // namespace nhmms
