#include <catch2/catch_amalgamated.hpp>

#include "tristage/scenario.hpp"

using namespace tristage;

namespace {

std::vector<ConfigError> errors_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigParseError& e) {
    return e.errors();
  }
  FAIL("expected the config to be rejected");
  return {};
}

bool mentions(const std::vector<ConfigError>& errs, const std::string& needle) {
  for (const auto& e : errs)
    if (e.message.find(needle) != std::string::npos) return true;
  return false;
}

const char* kMinimalPad = R"({
  "variant": "three_stage",
  "family": "pad",
  "family_params": { "n": 8 },
  "seed": 1
})";

}  // namespace

TEST_CASE("a minimal config fills in the documented defaults") {
  const ScenarioConfig cfg = parse_config(kMinimalPad);
  REQUIRE(cfg.variant == Variant::ThreeStage);
  REQUIRE(cfg.family == Family::Pad);
  REQUIRE(cfg.n == 8);
  REQUIRE(cfg.figure == Figure::Fig2);
  REQUIRE(cfg.trials == 1000);
  REQUIRE(cfg.per_bit_keys == false);
  REQUIRE(cfg.coding.enabled == false);
  REQUIRE(cfg.adversary.kind == AdversaryKind::None);
  REQUIRE(cfg.seed == 1);
}

TEST_CASE("parse after serialize is the identity") {
  const char* texts[] = {
      kMinimalPad,
      R"({"variant":"three_stage","family":"modexp","family_params":{"p":23},
          "adversary":{"kind":"passive","links":"all"},"trials":7,"seed":9})",
      R"({"variant":"chain_forward","family":"pad","family_params":{"n":6},
          "topology":{"figure":"fig4","chain_length":5},
          "adversary":{"kind":"passive","links":["A1->B1","A2->B2"]},"seed":2})",
      R"({"variant":"split_path","family":"pad","family_params":{"n":12},
          "topology":{"figure":"fig6"},"coding":{"enabled":true,"k":3},
          "adversary":{"kind":"mitm","link":"A2->B","strategy":"substitute","payload":"1010"},"seed":3})",
      R"({"variant":"split_path","family":"pad","family_params":{"n":10},
          "adversary":{"kind":"mitm","link":"A1->B","strategy":"flip_bit","bit_index":4},"seed":4})",
      R"({"variant":"two_stage","family":"pad","family_params":{"n":5},
          "adversary":{"kind":"mitm","link":"B1->A2","strategy":"relay"},"seed":5})",
      R"({"variant":"quantum_three_stage","family":"rotation",
          "family_params":{"n":9,"angles":{"theta_a":0.785,"theta_b":1.25}},
          "adversary":{"kind":"intercept_resend","link":"stage2"},"seed":6})",
      R"({"variant":"quantum_three_stage","family":"rotation",
          "family_params":{"n":9,"angles":"uniform"},"per_bit_keys":true,"seed":7})",
  };
  for (const char* text : texts) {
    const ScenarioConfig cfg = parse_config(text);
    const std::string round = serialize_config(cfg);
    REQUIRE(parse_config(round) == cfg);
    REQUIRE(serialize_config(parse_config(round)) == round);
  }
}

TEST_CASE("seed is mandatory") {
  const auto errs = errors_of(R"({"variant":"three_stage","family":"pad","family_params":{"n":8}})");
  REQUIRE(mentions(errs, "seed"));
  REQUIRE(mentions(errs, "wall clock"));
}

TEST_CASE("unknown fields are rejected with their line") {
  const auto errs = errors_of(
      "{\n"
      "  \"variant\": \"three_stage\",\n"
      "  \"family\": \"pad\",\n"
      "  \"family_params\": { \"n\": 8 },\n"
      "  \"surprise\": 1,\n"
      "  \"seed\": 1\n"
      "}");
  REQUIRE(errs.size() == 1);
  REQUIRE(mentions(errs, "surprise"));
  REQUIRE(errs[0].line == 5);
}

TEST_CASE("malformed json reports the offending line") {
  const auto errs = errors_of("{\n  \"variant\": \"three_stage\",\n  oops\n}");
  REQUIRE(errs.size() == 1);
  REQUIRE(errs[0].line == 3);
}

TEST_CASE("family params are checked per family") {
  REQUIRE(mentions(errors_of(R"({"variant":"three_stage","family":"pad","family_params":{"n":0},"seed":1})"), "n"));
  REQUIRE(mentions(errors_of(R"({"variant":"three_stage","family":"pad","family_params":{"p":7},"seed":1})"), "n"));
  REQUIRE(mentions(errors_of(R"({"variant":"three_stage","family":"modexp","family_params":{"p":9},"seed":1})"),
                   "prime"));
  REQUIRE(mentions(errors_of(R"({"variant":"three_stage","family":"modexp","family_params":{"p":3},"seed":1})"),
                   "prime"));
  REQUIRE(mentions(
      errors_of(
          R"({"variant":"quantum_three_stage","family":"rotation","family_params":{"n":4,"angles":"sideways"},"seed":1})"),
      "angles"));
}

TEST_CASE("variant and family must be compatible") {
  REQUIRE(mentions(
      errors_of(R"({"variant":"split_path","family":"modexp","family_params":{"p":23},"seed":1})"), "incompatible"));
  REQUIRE(mentions(
      errors_of(R"({"variant":"chain_forward","family":"modexp","family_params":{"p":23},"seed":1})"), "incompatible"));
  REQUIRE(mentions(
      errors_of(R"({"variant":"three_stage","family":"rotation","family_params":{"n":4,"angles":"uniform"},"seed":1})"),
      "quantum"));
  REQUIRE(mentions(
      errors_of(R"({"variant":"quantum_three_stage","family":"pad","family_params":{"n":4},"seed":1})"), "rotation"));
}

TEST_CASE("split-path payload and coding arithmetic is validated") {
  REQUIRE(mentions(errors_of(R"({"variant":"split_path","family":"pad","family_params":{"n":7},"seed":1})"), "even"));
  REQUIRE(mentions(errors_of(R"({"variant":"split_path","family":"pad","family_params":{"n":8},
                               "coding":{"enabled":true,"k":3},"seed":1})"),
                   "k"));
  REQUIRE(mentions(errors_of(R"({"variant":"three_stage","family":"pad","family_params":{"n":8},
                               "coding":{"enabled":true,"k":2},"seed":1})"),
                   "coding"));
}

TEST_CASE("topology echo must match the variant") {
  REQUIRE(mentions(errors_of(R"({"variant":"three_stage","family":"pad","family_params":{"n":8},
                               "topology":{"figure":"fig6"},"seed":1})"),
                   "runs on fig2"));
  REQUIRE(mentions(errors_of(R"({"variant":"three_stage","family":"pad","family_params":{"n":8},
                               "topology":{"figure":"fig2","chain_length":4},"seed":1})"),
                   "chain_length"));
  REQUIRE(mentions(errors_of(R"({"variant":"chain_forward","family":"pad","family_params":{"n":8},
                               "topology":{"figure":"fig4","chain_length":2},"seed":1})"),
                   "chain_length"));
}

TEST_CASE("adversary configs are validated in place") {
  REQUIRE(mentions(errors_of(R"({"variant":"three_stage","family":"pad","family_params":{"n":8},
                               "adversary":{"kind":"sniffer"},"seed":1})"),
                   "kind"));
  REQUIRE(mentions(errors_of(R"({"variant":"three_stage","family":"pad","family_params":{"n":8},
                               "adversary":{"kind":"mitm","link":"A->B","strategy":"flip_bit"},"seed":1})"),
                   "bit_index"));
  REQUIRE(mentions(errors_of(R"({"variant":"three_stage","family":"pad","family_params":{"n":8},
                               "adversary":{"kind":"mitm","link":"Q->Z","strategy":"relay"},"seed":1})"),
                   "link"));
  REQUIRE(mentions(errors_of(R"({"variant":"quantum_three_stage","family":"rotation",
                               "family_params":{"n":4,"angles":{"theta_a":0.1,"theta_b":0.2}},
                               "adversary":{"kind":"mitm","link":"A->B","strategy":"relay"},"seed":1})"),
                   "mitm"));
  REQUIRE(mentions(errors_of(R"({"variant":"three_stage","family":"pad","family_params":{"n":8},
                               "adversary":{"kind":"intercept_resend","link":"stage1"},"seed":1})"),
                   "intercept"));
  REQUIRE(mentions(errors_of(R"({"variant":"quantum_three_stage","family":"rotation",
                               "family_params":{"n":4,"angles":{"theta_a":0.1,"theta_b":0.2}},
                               "adversary":{"kind":"intercept_resend","link":"A->B"},"seed":1})"),
                   "stage"));
}

TEST_CASE("per-bit keys and uniform angles imply each other") {
  REQUIRE(mentions(errors_of(R"({"variant":"quantum_three_stage","family":"rotation",
                               "family_params":{"n":4,"angles":"uniform"},"seed":1})"),
                   "per_bit_keys"));
  REQUIRE(mentions(errors_of(R"({"variant":"quantum_three_stage","family":"rotation",
                               "family_params":{"n":4,"angles":{"theta_a":0.1,"theta_b":0.2}},
                               "per_bit_keys":true,"seed":1})"),
                   "per_bit_keys"));
  REQUIRE(mentions(errors_of(R"({"variant":"three_stage","family":"pad","family_params":{"n":8},
                               "per_bit_keys":true,"seed":1})"),
                   "per-bit"));
}

TEST_CASE("trials must be positive") {
  REQUIRE(mentions(
      errors_of(R"({"variant":"three_stage","family":"pad","family_params":{"n":8},"trials":0,"seed":1})"),
      "trials"));
}

TEST_CASE("several mistakes are reported together") {
  const auto errs = errors_of(R"({"variant":"split_path","family":"modexp","family_params":{"p":9},
                                "trials":0})");
  REQUIRE(errs.size() >= 3);
}

TEST_CASE("serialized configs order their keys stably") {
  const std::string a = serialize_config(parse_config(kMinimalPad));
  const std::string b = serialize_config(parse_config(a));
  REQUIRE(a == b);
  REQUIRE(a.find("\"adversary\"") < a.find("\"family\""));
  REQUIRE(a.find("\"family\"") < a.find("\"variant\""));
}
