#include <doctest.h>

#include <string>

#include "critbranch/config.hpp"
#include "critbranch/errors.hpp"

using namespace critbranch;

namespace {
std::string schema_path(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const SchemaError& e) {
    return e.path();
  }
  return "";
}
}  // namespace

TEST_SUITE("config") {
  TEST_CASE("a full configuration parses") {
    const auto cfg = parse_config_text(R"({
      "command": "simulate",
      "offspring": {"kind": "canonical", "nu": 0.5, "a0": 1.0},
      "immigration": {"kind": "perturbed", "delta": 0.4, "c": 0.1, "kappa": 0.25},
      "grids": {"t": [1, 10]},
      "seed": 5,
      "simulation": {"replicas": 100, "estimators": [{"quantity": "ratio", "t": 10, "j": 1}]}
    })");
    CHECK(cfg.command == "simulate");
    CHECK(cfg.offspring->nu == 0.5);
    CHECK(cfg.immigration->kappa == 0.25);
    CHECK(cfg.simulation.replicas == 100);
    REQUIRE(cfg.simulation.estimators.size() == 1);
    CHECK(cfg.simulation.estimators[0].kind == Quantity::Ratio);
    CHECK(cfg.series_order == 64);
    CHECK(make_offspring(*cfg.offspring).a0() == 1.0);
  }

  TEST_CASE("errors name the offending field") {
    CHECK(schema_path(R"({"offspring": {"kind": "canonical", "a0": 1}})") == "/offspring/nu");
    CHECK(schema_path(R"({"offspring": {"kind": "canonical", "nu": 0.5, "a0": 1, "extra": 2}})") ==
          "/offspring/extra");
    CHECK(schema_path(R"({"colour": 1})") == "/colour");
    CHECK(schema_path(R"({"simulation": {"replicas": 0}})") == "/simulation/replicas");
    CHECK(schema_path(R"({"grids": {"t": [3, 1]}})") == "/grids/t");
    CHECK(schema_path(R"({"offspring": {"kind": "finite", "rates": [1, -1, 1]}})") == "/offspring");
    CHECK(schema_path(R"({"command": )") == "/");
  }

  TEST_CASE("hash is stable and sensitive to resolved content") {
    const std::string text = R"({"command": "solve", "offspring": {"kind": "canonical", "nu": 0.5, "a0": 1}})";
    auto a = parse_config_text(text);
    const auto b = parse_config_text(text);
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    a.seed = 9;
    refresh_resolved(a);
    CHECK(config_hash(a) != config_hash(b));
    // FNV-1a 64 of the empty string is its offset basis.
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
  }
}
