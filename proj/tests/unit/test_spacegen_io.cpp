#include <doctest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "nhmms/io.hpp"
#include "nhmms/spacegen.hpp"

using namespace nhmms;

TEST_CASE("grid generator") {
  const auto g = generate({SpaceFamily::grid, 1, 4});
  REQUIRE(g.space.size() == 4);
  for (Index i = 0; i < 4; ++i) CHECK(g.space.mass(i) == 1.0);
  CHECK(g.space.distance(0, 3) == 3.0);
  CHECK(g.lambda.family() == LambdaFamily::power);
  CHECK(g.lambda.k() == 1.0);
  const auto r = check_upper_doubling(g.space, g.lambda);
  CHECK(r.pass());
  CHECK(r.measured_C0 <= 1.0 / 1.05 + 1e-12);

  const auto g2 = generate({SpaceFamily::grid, 2, 3, 0.5});
  CHECK(g2.space.size() == 9);
  CHECK(g2.lambda.k() == 2.0);
  CHECK(g2.space.distance(0, 8) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("cantor generator") {
  SpaceSpec spec;
  spec.family = SpaceFamily::cantor;
  spec.level = 2;
  const auto g = generate(spec);
  REQUIRE(g.space.size() == 4);
  const double want[] = {0.0, 2.0 / 9.0, 2.0 / 3.0, 8.0 / 9.0};
  for (Index i = 0; i < 4; ++i) {
    CHECK(g.space.distance(0, i) == doctest::Approx(want[i]).epsilon(1e-15));
    CHECK(g.space.mass(i) == 0.25);
  }
  CHECK(g.lambda.k() == doctest::Approx(0.6309297535714574).epsilon(1e-15));
}

TEST_CASE("every family passes its own upper-doubling check") {
  const SpaceSpec specs[] = {
      {SpaceFamily::grid, 1, 16},
      {SpaceFamily::grid, 2, 4},
      {SpaceFamily::cantor, 1, 4, 1.0, 5},
      {SpaceFamily::powerlaw_line, 1, 4, 1.0, 3, 2.0, 20},
      {SpaceFamily::mixed_dimension, 1, 4},
  };
  for (const auto& spec : specs) {
    const auto g = generate(spec);
    const auto r = check_upper_doubling(g.space, g.lambda);
    INFO(to_string(spec.family));
    CHECK(r.pass());
    CHECK(r.measured_C0 <= 1.0 / 1.05 + 1e-12);
  }
}

TEST_CASE("generator preconditions") {
  CHECK_THROWS_AS(generate({SpaceFamily::grid, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(generate({SpaceFamily::grid, 3, 17}), std::invalid_argument);
  SpaceSpec c;
  c.family = SpaceFamily::cantor;
  c.level = 0;
  CHECK_THROWS_AS(generate(c), std::invalid_argument);
  CHECK_THROWS_AS(space_family_from_string("torus"), std::invalid_argument);
}

TEST_CASE("space files round-trip bit for bit") {
  const auto dir = std::filesystem::temp_directory_path() / "nhmms_io_test";
  std::filesystem::create_directories(dir);
  const auto g = generate({SpaceFamily::cantor, 1, 4, 1.0, 3});
  write_json(dir / "s.json", space_to_json(g.space, g.lambda));
  const auto back = load_space(dir / "s.json");
  CHECK(back.space.id() == g.space.id());
  CHECK(back.lambda.C() == g.lambda.C());
  CHECK(back.lambda.k() == g.lambda.k());
  CHECK(dump_json(space_to_json(back.space, back.lambda)) == dump_json(space_to_json(g.space, g.lambda)));

  const auto f = fixtures::random_function(g.space, 1);
  write_json(dir / "f.json", function_to_json(f));
  const auto fb = load_function(dir / "f.json", back.space);
  for (Index i = 0; i < f.size(); ++i) CHECK(fb[i] == f[i]);

  const auto other = generate({SpaceFamily::grid, 1, 8});
  CHECK_THROWS_AS(load_function(dir / "f.json", other.space), BindingError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("space file parsing") {
  Json doc = Json::parse(R"({"version": 1, "points": [[0], [1], [3]], "masses": [1, 1, 2],
                            "lambda": {"family": "power", "C": 4, "k": 1}})");
  const auto sf = parse_space(doc);
  CHECK(sf.space.id() == fixtures::e3().id());
  CHECK(sf.lambda.declared().C_lambda == 2.0);

  doc["lambda"]["family"] = "bogus";
  CHECK_THROWS(parse_space(doc));
  doc = Json::parse(R"({"version": 1, "distance_matrix": [[0, 1], [2, 0]], "masses": [1, 1],
                       "lambda": {"family": "power", "C": 4, "k": 1}})");
  CHECK_THROWS_AS(parse_space(doc), SpaceError);
  doc = Json::parse(R"({"version": 1, "masses": [1, 1], "lambda": {"family": "power", "C": 4, "k": 1}})");
  CHECK_THROWS_AS(parse_space(doc), FormatError);
  doc = Json::parse(R"({"version": 1, "points": [[0], [1]], "distance_matrix": [[0, 2], [2, 0]],
                       "masses": [1, 1], "lambda": {"family": "power", "C": 4, "k": 1}})");
  CHECK_THROWS_AS(parse_space(doc), FormatError);
  CHECK_THROWS_AS(load_space("/nonexistent/space.json"), FormatError);
}

TEST_CASE("numbers print with 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2.0");
  CHECK(format_number(1.0 / 3.0) == "0.33333333333333331");
  CHECK(dump_json(Json{{"a", 0.5}}) == "{\n  \"a\": 0.5\n}\n");
}
