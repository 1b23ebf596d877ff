#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sensemake/scenario.hpp"

using namespace sensemake;

namespace {

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("figure2 parses into two frames and ten variables") {
  ScenarioDoc doc = load_scenario(fixture("figure2.json"));
  REQUIRE(doc.frames.has_value());
  CHECK(doc.frames->frames.size() == 2);
  CHECK(doc.frames->relations.size() == 11);
  REQUIRE(doc.spec.net.has_value());
  CHECK(doc.spec.net->size() == 10);
  CHECK(doc.spec.net->edges().size() == 11);
  CHECK(doc.spec.edge_kinds.at({"Stationary_Traffic", "Late_For_Work"}) == RelationKind::Across);
  CHECK(doc.spec.edge_kinds.at({"Traffic_Accident", "Debris"}) == RelationKind::Within);
  CHECK_FALSE(doc.fitted.empty());
}

TEST_CASE("maier parses as a memory-only scenario") {
  ScenarioDoc doc = load_scenario(fixture("maier.json"));
  CHECK_FALSE(doc.spec.net.has_value());
  REQUIRE(doc.spec.cam.has_value());
  CHECK(doc.spec.cam->size() == 14);
  CHECK(doc.spec.loop.theta_on == doctest::Approx(0.34));
  CHECK(doc.spec.cam->params().decay == doctest::Approx(0.15));
}

TEST_CASE("appendix1 wires bindings and the decision rule") {
  ScenarioDoc doc = load_scenario(fixture("appendix1.json"));
  REQUIRE(doc.spec.decision.has_value());
  CHECK(doc.spec.decision->action_if_low == "continue_route");
  CHECK(doc.spec.bindings.size() == 2);
  CHECK(doc.incompatible.size() == 1);
}

TEST_CASE("round-trip serialization is idempotent") {
  for (const char* name :
       {"appendix1.json", "explosion.json", "figure2.json", "figure5.json", "maier.json"}) {
    CAPTURE(name);
    std::string once = serialize_scenario(load_scenario(fixture(name)));
    std::string twice = serialize_scenario(parse_scenario(once));
    CHECK(once == twice);
  }
}

TEST_CASE("parse diagnostics") {
  SUBCASE("not json at all") {
    try {
      parse_scenario("not json");
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Malformed);
    }
  }
  SUBCASE("unknown section") {
    try {
      parse_scenario(R"({"wibble": 1})");
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SchemaViolation);
      CHECK(std::string(e.what()).find("wibble") != std::string::npos);
    }
  }
  SUBCASE("row that does not normalize names the child") {
    std::string text = R"({
      "variables": [{"name": "A", "states": ["1", "0"]}],
      "cpts": [{"child": "A", "rows": [{"given": [], "p": [0.6, 0.6]}]}]
    })";
    try {
      parse_scenario(text);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::RowNotNormalized);
      CHECK(std::string(e.what()).find("A") != std::string::npos);
    }
  }
  SUBCASE("binding to a missing unit") {
    std::string text = slurp(fixture("appendix1.json"));
    auto pos = text.find("accident_scene\", \"variable");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 14, "missing_unit__");
    try {
      parse_scenario(text);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UnknownReference);
    }
  }
  SUBCASE("frames and variables are mutually exclusive") {
    std::string text = R"({
      "frames": [{"name": "f", "elements": ["A"]}],
      "variables": [{"name": "A", "states": ["1", "0"]}],
      "cpts": [{"child": "A", "rows": [{"given": [], "p": [0.5, 0.5]}]}]
    })";
    CHECK_THROWS_AS(parse_scenario(text), Error);
  }
  SUBCASE("bindings without a memory section") {
    std::string text = R"({
      "variables": [{"name": "A", "states": ["1", "0"]}],
      "cpts": [{"child": "A", "rows": [{"given": [], "p": [0.5, 0.5]}]}],
      "bindings": [{"unit": "x", "variable": "A", "on": "1", "off": "0"}]
    })";
    CHECK_THROWS_AS(parse_scenario(text), Error);
  }
  SUBCASE("decision threshold bounds") {
    std::string text = R"({
      "variables": [{"name": "A", "states": ["1", "0"]}],
      "cpts": [{"child": "A", "rows": [{"given": [], "p": [0.5, 0.5]}]}],
      "decision": {"query": "A", "trigger": "1", "threshold": 1.5,
                   "action_if_high": "x", "action_if_low": "y"}
    })";
    CHECK_THROWS_AS(parse_scenario(text), Error);
  }
  SUBCASE("inverted loop thresholds") {
    std::string text = R"({
      "memories": [{"name": "m", "attributes": ["a"]}],
      "params": {"theta_on": 0.1, "theta_off": 0.4}
    })";
    CHECK_THROWS_AS(parse_scenario(text), Error);
  }
}

TEST_CASE("serialization is canonical regardless of input order") {
  std::string shuffled = R"({
    "variables": [
      {"name": "B", "states": ["1", "0"]},
      {"name": "A", "states": ["1", "0"]}
    ],
    "cpts": [
      {"child": "B", "parents": ["A"],
       "rows": [{"given": ["0"], "p": [0.2, 0.8]}, {"given": ["1"], "p": [0.9, 0.1]}]},
      {"child": "A", "rows": [{"given": [], "p": [0.5, 0.5]}]}
    ]
  })";
  std::string sorted = R"({
    "variables": [
      {"name": "A", "states": ["1", "0"]},
      {"name": "B", "states": ["1", "0"]}
    ],
    "cpts": [
      {"child": "A", "rows": [{"given": [], "p": [0.5, 0.5]}]},
      {"child": "B", "parents": ["A"],
       "rows": [{"given": ["1"], "p": [0.9, 0.1]}, {"given": ["0"], "p": [0.2, 0.8]}]}
    ]
  })";
  CHECK(serialize_scenario(parse_scenario(shuffled)) == serialize_scenario(parse_scenario(sorted)));
}

TEST_CASE("defaults are emitted explicitly") {
  ScenarioDoc doc = parse_scenario(R"({"memories": [{"name": "m", "attributes": ["a"]}]})");
  std::string text = serialize_scenario(doc);
  CHECK(text.find("\"theta_on\": 0.5") != std::string::npos);
  CHECK(text.find("\"max_sweeps\": 10000") != std::string::npos);
  CHECK(text.find("\"scale_by_max_degree\": true") != std::string::npos);
  CHECK(text.back() == '\n');
}

TEST_CASE("missing file reports Malformed") {
  try {
    load_scenario(fixture("no_such_file.json"));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Malformed);
  }
}
