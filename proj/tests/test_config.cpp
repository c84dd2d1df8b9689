#include <doctest.h>

#include <cmath>
#include <string>

#include "wodzicki/config.hpp"
#include "wodzicki/errors.hpp"
#include "wodzicki/io.hpp"
#include "wodzicki/random_data.hpp"

using namespace wodzicki;

namespace {

const char* kFlat = R"(
dimension = 2

[operator]
kind = "flat-laplacian"

[[functional]]
kind = "metric"
V = [1.0, 0.0]
W = [1.0, 0.0]
)";

std::string with_line(const std::string& line) { return std::string(kFlat) + line + "\n"; }

}  // namespace

TEST_CASE("flat configuration with defaults") {
  const RunConfig c = parse_run_config(kFlat);
  CHECK(c.defm->dimension() == 2);
  CHECK(c.defm->is_commutative());
  CHECK(c.op == OperatorKind::FlatLaplacian);
  REQUIRE(c.functionals.size() == 1);
  const auto d = c.describe();
  CHECK(d["depth"] == 3);
  CHECK(d["functionals"][0]["flavor"] == "geometric");

  const auto out = run_compute(c);
  REQUIRE(out["results"].size() == 1);
  const auto& r = out["results"][0];
  // −(v₁/2) τ(1) for geometric ∂₁
  CHECK(std::abs(r["value"]["re"].get<double>() + M_PI) < 1e-13);
  CHECK(std::abs(r["value"]["im"].get<double>()) < 1e-13);
}

TEST_CASE("JSON configuration is equivalent") {
  const char* json = R"({"dimension": 2,
    "operator": {"kind": "flat-laplacian"},
    "functional": [{"kind": "metric", "V": [1.0, 0.0], "W": [1.0, 0.0]}]})";
  const auto a = run_compute(parse_run_config(kFlat));
  const auto b = run_compute(parse_run_config(json));
  CHECK(a["results"][0]["value"] == b["results"][0]["value"]);
}

TEST_CASE("invalid configurations") {
  CHECK_THROWS_AS(parse_run_config(with_line("bogus = 1")), ConfigurationError);
  CHECK_THROWS_AS(parse_run_config("dimension = 3\n[operator]\nkind = \"flat-laplacian\"\n"),
                  ConfigurationError);
  CHECK_THROWS_AS(parse_run_config("dimension = 2\ntheta = [[0.0, 1.0], [1.0, 0.0]]\n"
                                   "[operator]\nkind = \"flat-laplacian\"\n"),
                  ConfigurationError);
  CHECK_THROWS_AS(parse_run_config("dimension = 2\n[operator]\nkind = \"wave\"\n"),
                  ConfigurationError);
  CHECK_THROWS_AS(parse_run_config("dimension = 2\n[operator]\nkind = \"flat-laplacian\"\n"
                                   "[[functional]]\nkind = \"metric\"\nV = [1.0]\nW = [1.0, 0.0]\n"),
                  ConfigurationError);
  CHECK_THROWS_AS(parse_run_config("dimension = [2"), ConfigurationError);
  CHECK_THROWS_AS(parse_run_config("{\"dimension\": 2,"), ConfigurationError);
  CHECK_THROWS_AS(load_run_config("/nonexistent/config.toml"), ConfigurationError);
}

TEST_CASE("element records round trip") {
  auto defm = DeformationMatrix::two_torus(0.9);
  DataGenerator gen(31);
  auto x = gen.trig_poly(defm, 4, 2, 1.0) + gen.trig_poly(defm, 3, 2, 1.0, Side::Right);
  const auto j = element_to_json(x);
  CHECK(j["dimension"] == 2);
  CHECK(element_from_json(defm, j) == x);
  CHECK(element_from_json(defm, j["terms"]) == x);

  auto d4 = DeformationMatrix::commutative(4);
  CHECK_THROWS_AS(element_from_json(d4, j), ConfigurationError);
  CHECK_THROWS_AS(element_from_json(defm, nlohmann::json{{"terms", 3}}), ConfigurationError);

  const auto twice = element_from_json(
      defm, nlohmann::json::parse(R"([{"k": [1, 0], "re": 1.0}, {"k": [1, 0], "im": 2.0}])"));
  const int k[] = {1, 0};
  CHECK(twice == TorusElement::monomial(defm, k, Complex(1.0, 2.0)));
}
