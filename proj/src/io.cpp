#include "nhmms/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nhmms {

namespace {

const Json& field(const Json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw FormatError(std::string("missing field '") + key + "'");
  return *it;
}

double number(const Json& doc, const char* key) {
  const Json& v = field(doc, key);
  if (!v.is_number()) throw FormatError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> number_array(const Json& v, const std::string& what) {
  if (!v.is_array()) throw FormatError(what + " must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) throw FormatError(what + " must contain only numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

void dump_value(const Json& v, std::ostringstream& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << pad << Json(it.key()).dump() << ": ";
        dump_value(it.value(), out, depth + 1);
      }
      out << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      const bool scalars = std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); });
      if (v.empty()) {
        out << "[]";
      } else if (scalars) {
        out << "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out << ", ";
          dump_value(v[i], out, depth + 1);
        }
        out << "]";
      } else {
        out << "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out << ",\n";
          out << pad;
          dump_value(v[i], out, depth + 1);
        }
        out << "\n" << close << "]";
      }
      return;
    }
    case Json::value_t::number_float: out << format_number(v.get<double>()); return;
    default: out << v.dump(); return;
  }
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  // Keep the JSON number typed as floating point on reload.
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string dump_json(const Json& doc) {
  std::ostringstream out;
  dump_value(doc, out, 0);
  out << "\n";
  return out.str();
}

void write_json(const std::filesystem::path& path, const Json& doc) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot write " + path.string());
  f << dump_json(doc);
  if (!f) throw FormatError("failed writing " + path.string());
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Json lambda_to_json(const DominatingFunction& lambda) {
  Json j;
  j["family"] = to_string(lambda.family());
  j["C"] = lambda.C();
  j["k"] = lambda.k();
  if (lambda.family() == LambdaFamily::two_power) j["k2"] = lambda.k2();
  if (lambda.family() == LambdaFamily::per_point_power) j["scales"] = lambda.per_point();
  j["m"] = lambda.declared().m;
  j["C_lambda"] = lambda.declared().C_lambda;
  j["C_tilde"] = lambda.declared().C_tilde;
  return j;
}

DominatingFunction lambda_from_json(const Json& doc, const MetricMeasureSpace& space) {
  if (!doc.is_object()) throw FormatError("'lambda' must be an object");
  const auto family = lambda_family_from_string(field(doc, "family").get<std::string>());
  const double k = number(doc, "k");
  auto lambda = [&] {
    switch (family) {
      case LambdaFamily::power: return DominatingFunction::power(number(doc, "C"), k);
      case LambdaFamily::floored_power: {
        std::vector<double> floors(space.masses().begin(), space.masses().end());
        return DominatingFunction::floored_power(number(doc, "C"), k, std::move(floors));
      }
      case LambdaFamily::per_point_power: {
        auto scales = number_array(field(doc, "scales"), "lambda.scales");
        if (scales.size() != space.size()) throw FormatError("lambda.scales length differs from atom count");
        return DominatingFunction::per_point_power(std::move(scales), k);
      }
      case LambdaFamily::two_power:
        return DominatingFunction::two_power(number(doc, "C"), k, number(doc, "k2"));
    }
    throw FormatError("unsupported lambda family");
  }();
  LambdaConstants c = lambda.declared();
  if (doc.contains("m")) c.m = number(doc, "m");
  if (doc.contains("C_lambda")) c.C_lambda = number(doc, "C_lambda");
  if (doc.contains("C_tilde")) c.C_tilde = number(doc, "C_tilde");
  lambda.with_declared(c);
  return lambda;
}

SpaceFile parse_space(const Json& doc) {
  if (!doc.is_object()) throw FormatError("space file must be a JSON object");
  if (doc.value("version", 0) != 1) throw FormatError("unsupported space file version");
  auto masses = number_array(field(doc, "masses"), "masses");

  std::vector<std::vector<double>> coords;
  if (doc.contains("points")) {
    const Json& pts = doc["points"];
    if (!pts.is_array()) throw FormatError("points must be an array of rows");
    for (std::size_t i = 0; i < pts.size(); ++i)
      coords.push_back(number_array(pts[i], "points[" + std::to_string(i) + "]"));
  }

  auto build = [&]() -> MetricMeasureSpace {
    if (!doc.contains("distance_matrix")) {
      if (coords.empty()) throw FormatError("space file needs 'points' or 'distance_matrix'");
      return MetricMeasureSpace::from_points(coords, masses);
    }
    const Json& rows = doc["distance_matrix"];
    if (!rows.is_array() || rows.size() != masses.size())
      throw FormatError("distance_matrix must have one row per mass");
    std::vector<double> dist;
    dist.reserve(masses.size() * masses.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      auto row = number_array(rows[i], "distance_matrix[" + std::to_string(i) + "]");
      if (row.size() != masses.size())
        throw FormatError("distance_matrix row " + std::to_string(i) + " has wrong length");
      dist.insert(dist.end(), row.begin(), row.end());
    }
    bool euclidean = false;
    if (!coords.empty()) {
      const auto reference = MetricMeasureSpace::from_points(coords, masses);
      euclidean = true;
      const auto table = reference.distance_table();
      for (std::size_t i = 0; i < table.size(); ++i)
        if (std::fabs(table[i] - dist[i]) > 1e-12 * std::max(1.0, reference.diameter()))
          throw FormatError("distance_matrix disagrees with the Euclidean distances of points");
    }
    return MetricMeasureSpace(std::move(dist), masses, coords, !euclidean);
  };

  try {
    MetricMeasureSpace space = build();
    DominatingFunction lambda = lambda_from_json(field(doc, "lambda"), space);
    return {std::move(space), std::move(lambda)};
  } catch (const Json::exception& e) {
    throw FormatError(e.what());
  }
}

SpaceFile load_space(const std::filesystem::path& path) {
  try {
    return parse_space(read_json(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const SpaceError& e) {
    throw SpaceError(path.string() + ": " + e.what());
  }
}

Json space_to_json(const MetricMeasureSpace& space, const DominatingFunction& lambda) {
  Json j;
  j["version"] = 1;
  if (!space.coords().empty()) j["points"] = space.coords();
  const std::size_t n = space.size();
  Json rows = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(space.distance_table().begin() + static_cast<std::ptrdiff_t>(i * n),
                            space.distance_table().begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
    rows.push_back(row);
  }
  j["distance_matrix"] = std::move(rows);
  j["masses"] = std::vector<double>(space.masses().begin(), space.masses().end());
  j["lambda"] = lambda_to_json(lambda);
  j["space_hash"] = space.id();
  return j;
}

SpaceFunction parse_function(const Json& doc, const MetricMeasureSpace& space) {
  if (!doc.is_object()) throw FormatError("function file must be a JSON object");
  const std::string hash = field(doc, "space_hash").get<std::string>();
  if (hash != space.id())
    throw BindingError("function file is bound to space " + hash + ", loaded space is " + space.id());
  return SpaceFunction(space, number_array(field(doc, "values"), "values"));
}

SpaceFunction load_function(const std::filesystem::path& path, const MetricMeasureSpace& space) {
  try {
    return parse_function(read_json(path), space);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Json function_to_json(const SpaceFunction& f) {
  Json j;
  j["space_hash"] = f.space_id();
  j["values"] = std::vector<double>(f.values().begin(), f.values().end());
  return j;
}

}  // namespace nhmms
