#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tristage/adversary.hpp"
#include "tristage/topology.hpp"
#include "tristage/transforms.hpp"

namespace tristage {

enum class Variant { ThreeStage, ChainForward, TwoStage, SplitPath, QuantumThreeStage };

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::ThreeStage: return "three_stage";
    case Variant::ChainForward: return "chain_forward";
    case Variant::TwoStage: return "two_stage";
    case Variant::SplitPath: return "split_path";
    case Variant::QuantumThreeStage: return "quantum_three_stage";
  }
  return "?";
}

inline std::optional<Variant> variant_from_string(const std::string& s) {
  for (Variant v : {Variant::ThreeStage, Variant::ChainForward, Variant::TwoStage, Variant::SplitPath,
                    Variant::QuantumThreeStage})
    if (s == variant_name(v)) return v;
  return std::nullopt;
}

inline std::optional<Family> family_from_string(const std::string& s) {
  for (Family f : {Family::Pad, Family::ModExp, Family::Rotation})
    if (s == family_name(f)) return f;
  return std::nullopt;
}

inline std::optional<Figure> figure_from_string(const std::string& s) {
  for (Figure f : {Figure::Fig2, Figure::Fig4, Figure::Fig5, Figure::Fig6})
    if (s == figure_name(f)) return f;
  return std::nullopt;
}

// Each variant is defined on one geometry; the config's topology block is
// an explicit echo of that choice, validated rather than trusted.
inline Figure expected_figure(Variant v) {
  switch (v) {
    case Variant::ThreeStage: return Figure::Fig2;
    case Variant::ChainForward: return Figure::Fig4;
    case Variant::TwoStage: return Figure::Fig5;
    case Variant::SplitPath: return Figure::Fig6;
    case Variant::QuantumThreeStage: return Figure::Fig2;
  }
  return Figure::Fig2;
}

struct AnglesSpec {
  bool uniform = false;  // fresh uniform angles per bit
  double theta_a = 0.0;
  double theta_b = 0.0;

  friend bool operator==(const AnglesSpec&, const AnglesSpec&) = default;
};

struct CodingSpec {
  bool enabled = false;
  int k = 2;

  friend bool operator==(const CodingSpec&, const CodingSpec&) = default;
};

// One experiment: a protocol variant under one transform family, topology,
// and adversary, run for `trials` seeded repetitions. The seed is mandatory
// so every run is reproducible by construction.
struct ScenarioConfig {
  Variant variant = Variant::ThreeStage;
  Family family = Family::Pad;
  std::size_t n = 0;     // pad width; doubles as the quantum bit-train length
  std::uint64_t p = 0;   // modexp modulus
  AnglesSpec angles;     // rotation keys
  Figure figure = Figure::Fig2;
  int chain_length = 3;  // fig4 only
  AdversaryModel adversary;
  CodingSpec coding;
  long trials = 1000;
  std::uint64_t seed = 0;
  bool per_bit_keys = false;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct ConfigError {
  int line = 0;  // 1-based position in the config text; 0 when unanchored
  std::string message;
};

class ConfigParseError : public std::runtime_error {
 public:
  explicit ConfigParseError(std::vector<ConfigError> errors)
      : std::runtime_error(render(errors)), errors_(std::move(errors)) {}

  const std::vector<ConfigError>& errors() const { return errors_; }

  static std::string render(const std::vector<ConfigError>& errs) {
    std::string out = "invalid scenario config:";
    for (const auto& e : errs) {
      out += "\n  ";
      if (e.line > 0) out += "line " + std::to_string(e.line) + ": ";
      out += e.message;
    }
    return out;
  }

 private:
  std::vector<ConfigError> errors_;
};

inline nlohmann::json adversary_json(const AdversaryModel& a) {
  nlohmann::json j;
  switch (a.kind) {
    case AdversaryKind::None:
      j["kind"] = "none";
      break;
    case AdversaryKind::Passive:
      j["kind"] = "passive";
      if (a.all_links)
        j["links"] = "all";
      else
        j["links"] = a.links;
      break;
    case AdversaryKind::Mitm:
      j["kind"] = "mitm";
      j["link"] = a.link;
      switch (a.strategy) {
        case MitmStrategy::Relay: j["strategy"] = "relay"; break;
        case MitmStrategy::Substitute:
          j["strategy"] = "substitute";
          j["payload"] = a.substitute_payload.str();
          break;
        case MitmStrategy::FlipBit:
          j["strategy"] = "flip_bit";
          j["bit_index"] = a.flip_bit_index;
          break;
      }
      break;
    case AdversaryKind::InterceptResend:
      j["kind"] = "intercept_resend";
      j["link"] = a.link;
      break;
  }
  return j;
}

inline nlohmann::json config_json(const ScenarioConfig& cfg) {
  nlohmann::json j;
  j["variant"] = variant_name(cfg.variant);
  j["family"] = family_name(cfg.family);
  nlohmann::json fp;
  switch (cfg.family) {
    case Family::Pad: fp["n"] = cfg.n; break;
    case Family::ModExp: fp["p"] = cfg.p; break;
    case Family::Rotation:
      if (cfg.angles.uniform)
        fp["angles"] = "uniform";
      else
        fp["angles"] = nlohmann::json{{"theta_a", cfg.angles.theta_a}, {"theta_b", cfg.angles.theta_b}};
      fp["n"] = cfg.n;
      break;
  }
  j["family_params"] = fp;
  nlohmann::json topo{{"figure", figure_name(cfg.figure)}};
  if (cfg.figure == Figure::Fig4) topo["chain_length"] = cfg.chain_length;
  j["topology"] = topo;
  j["adversary"] = adversary_json(cfg.adversary);
  j["coding"] = nlohmann::json{{"enabled", cfg.coding.enabled}, {"k", cfg.coding.k}};
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["per_bit_keys"] = cfg.per_bit_keys;
  return j;
}

inline std::string serialize_config(const ScenarioConfig& cfg) { return config_json(cfg).dump(2) + "\n"; }

// Parses and fully validates a scenario config, or throws ConfigParseError
// carrying every problem found, each anchored to a line of the input where
// the offending key occurs.
inline ScenarioConfig parse_config(const std::string& text) {
  namespace nj = nlohmann;
  std::vector<ConfigError> errs;

  auto line_of_byte = [&](std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    return line;
  };
  auto key_line = [&](const std::string& key) {
    const std::size_t pos = text.find("\"" + key + "\"");
    return pos == std::string::npos ? 0 : line_of_byte(pos);
  };
  auto fail = [&](const std::string& key, std::string msg) { errs.push_back({key_line(key), std::move(msg)}); };

  nj::json j;
  try {
    j = nj::json::parse(text);
  } catch (const nj::json::parse_error& e) {
    throw ConfigParseError({{line_of_byte(e.byte > 0 ? e.byte - 1 : 0), e.what()}});
  }
  if (!j.is_object()) throw ConfigParseError({{1, "config must be a single object"}});

  auto check_keys = [&](const nj::json& obj, const char* where, const std::set<std::string>& known) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!known.count(it.key())) fail(it.key(), std::string("unknown field \"") + it.key() + "\" in " + where);
  };
  check_keys(j, "config",
             {"variant", "family", "family_params", "topology", "adversary", "coding", "trials", "seed",
              "per_bit_keys"});

  auto get_string = [&](const nj::json& o, const char* key) -> std::optional<std::string> {
    if (!o.contains(key)) return std::nullopt;
    if (!o.at(key).is_string()) {
      fail(key, std::string("\"") + key + "\" must be a string");
      return std::nullopt;
    }
    return o.at(key).get<std::string>();
  };
  auto get_uint = [&](const nj::json& o, const char* key) -> std::optional<std::uint64_t> {
    if (!o.contains(key)) return std::nullopt;
    if (!o.at(key).is_number_unsigned()) {
      fail(key, std::string("\"") + key + "\" must be a non-negative integer");
      return std::nullopt;
    }
    return o.at(key).get<std::uint64_t>();
  };
  auto get_bool = [&](const nj::json& o, const char* key) -> std::optional<bool> {
    if (!o.contains(key)) return std::nullopt;
    if (!o.at(key).is_boolean()) {
      fail(key, std::string("\"") + key + "\" must be a boolean");
      return std::nullopt;
    }
    return o.at(key).get<bool>();
  };

  ScenarioConfig cfg;
  bool have_variant = false, have_family = false;

  if (auto s = get_string(j, "variant")) {
    if (auto v = variant_from_string(*s)) {
      cfg.variant = *v;
      have_variant = true;
    } else {
      fail("variant", "unknown variant \"" + *s + "\"");
    }
  } else if (!j.contains("variant")) {
    fail("variant", "\"variant\" is required");
  }

  if (auto s = get_string(j, "family")) {
    if (auto f = family_from_string(*s)) {
      cfg.family = *f;
      have_family = true;
    } else {
      fail("family", "unknown family \"" + *s + "\"");
    }
  } else if (!j.contains("family")) {
    fail("family", "\"family\" is required");
  }

  if (!j.contains("family_params") || !j.at("family_params").is_object()) {
    fail("family_params", "\"family_params\" object is required");
  } else if (have_family) {
    const nj::json& fp = j.at("family_params");
    switch (cfg.family) {
      case Family::Pad:
        check_keys(fp, "family_params", {"n"});
        if (!fp.contains("n"))
          fail("n", "pad family needs \"n\" >= 1 (payload and key width)");
        else if (auto n = get_uint(fp, "n")) {
          if (*n >= 1)
            cfg.n = static_cast<std::size_t>(*n);
          else
            fail("n", "\"n\" must be >= 1");
        }
        break;
      case Family::ModExp:
        check_keys(fp, "family_params", {"p"});
        if (!fp.contains("p"))
          fail("p", "modexp family needs a prime \"p\"");
        else if (auto p = get_uint(fp, "p")) {
          if (*p > 0xFFFFFFFFULL)
            fail("p", "\"p\" above 2^32 is outside desk scale");
          else if (!is_prime(*p) || *p < 5)
            fail("p", "\"p\" must be a prime >= 5");
          else
            cfg.p = *p;
        }
        break;
      case Family::Rotation: {
        check_keys(fp, "family_params", {"angles", "n"});
        if (!fp.contains("n"))
          fail("n", "rotation family needs \"n\" >= 1 (bit-train length)");
        else if (auto n = get_uint(fp, "n")) {
          if (*n >= 1)
            cfg.n = static_cast<std::size_t>(*n);
          else
            fail("n", "\"n\" must be >= 1");
        }
        if (!fp.contains("angles")) {
          fail("angles", "rotation family needs \"angles\": \"uniform\" or {theta_a, theta_b}");
        } else if (fp.at("angles").is_string()) {
          if (fp.at("angles").get<std::string>() == "uniform")
            cfg.angles.uniform = true;
          else
            fail("angles", "the only string form of \"angles\" is \"uniform\"");
        } else if (fp.at("angles").is_object()) {
          const nj::json& an = fp.at("angles");
          check_keys(an, "angles", {"theta_a", "theta_b"});
          for (const char* key : {"theta_a", "theta_b"}) {
            if (!an.contains(key) || !an.at(key).is_number()) {
              fail(key, std::string("\"") + key + "\" must be a number (radians)");
            } else {
              const double v = an.at(key).get<double>();
              if (!std::isfinite(v))
                fail(key, std::string("\"") + key + "\" must be finite");
              else
                (key[6] == 'a' ? cfg.angles.theta_a : cfg.angles.theta_b) = v;
            }
          }
        } else {
          fail("angles", "\"angles\" must be \"uniform\" or an object {theta_a, theta_b}");
        }
        break;
      }
    }
  }

  if (have_variant) cfg.figure = expected_figure(cfg.variant);
  if (j.contains("topology")) {
    if (!j.at("topology").is_object()) {
      fail("topology", "\"topology\" must be an object");
    } else {
      const nj::json& topo = j.at("topology");
      check_keys(topo, "topology", {"figure", "chain_length"});
      if (auto s = get_string(topo, "figure")) {
        if (auto f = figure_from_string(*s)) {
          if (have_variant && *f != expected_figure(cfg.variant))
            fail("figure", std::string(variant_name(cfg.variant)) + " runs on " +
                               figure_name(expected_figure(cfg.variant)) + ", not " + *s);
          else
            cfg.figure = *f;
        } else {
          fail("figure", "unknown figure \"" + *s + "\"");
        }
      } else if (!topo.contains("figure")) {
        fail("figure", "\"topology\" needs a \"figure\"");
      }
      if (topo.contains("chain_length")) {
        if (cfg.figure != Figure::Fig4) {
          fail("chain_length", "\"chain_length\" applies to fig4 only");
        } else if (auto c = get_uint(topo, "chain_length")) {
          if (*c < 3)
            fail("chain_length", "\"chain_length\" must be >= 3 (one forward link per stage)");
          else
            cfg.chain_length = static_cast<int>(*c);
        }
      }
    }
  }

  if (j.contains("adversary")) {
    if (!j.at("adversary").is_object()) {
      fail("adversary", "\"adversary\" must be an object");
    } else {
      const nj::json& a = j.at("adversary");
      const auto kind = get_string(a, "kind");
      if (!kind) {
        fail("adversary", "\"adversary\" needs a \"kind\"");
      } else if (*kind == "none") {
        check_keys(a, "adversary", {"kind"});
      } else if (*kind == "passive") {
        check_keys(a, "adversary", {"kind", "links"});
        if (!a.contains("links")) {
          fail("links", "passive adversary needs \"links\": \"all\" or an array of link ids");
        } else if (a.at("links").is_string() && a.at("links").get<std::string>() == "all") {
          cfg.adversary = AdversaryModel::passive_all();
        } else if (a.at("links").is_array()) {
          std::vector<std::string> links;
          bool ok = true;
          for (const auto& item : a.at("links")) {
            if (!item.is_string()) {
              fail("links", "\"links\" must contain only link-id strings");
              ok = false;
              break;
            }
            links.push_back(item.get<std::string>());
          }
          if (ok) cfg.adversary = AdversaryModel::passive(std::move(links));
        } else {
          fail("links", "\"links\" must be \"all\" or an array of link ids");
        }
      } else if (*kind == "mitm") {
        check_keys(a, "adversary", {"kind", "link", "strategy", "payload", "bit_index"});
        const auto link = get_string(a, "link");
        if (!link) fail("link", "mitm adversary needs a \"link\"");
        const std::string strategy = get_string(a, "strategy").value_or("relay");
        if (strategy == "relay") {
          if (link) cfg.adversary = AdversaryModel::mitm_relay(*link);
        } else if (strategy == "substitute") {
          if (auto payload = get_string(a, "payload")) {
            try {
              if (link) cfg.adversary = AdversaryModel::mitm_substitute(*link, Bits::parse(*payload));
            } catch (const std::invalid_argument& e) {
              fail("payload", e.what());
            }
          } else {
            fail("payload", "substitute strategy needs a \"payload\" of 0/1 characters");
          }
        } else if (strategy == "flip_bit") {
          if (auto idx = get_uint(a, "bit_index")) {
            if (link) cfg.adversary = AdversaryModel::mitm_flip(*link, static_cast<std::size_t>(*idx));
          } else {
            fail("bit_index", "flip_bit strategy needs a \"bit_index\"");
          }
        } else {
          fail("strategy", "unknown mitm strategy \"" + strategy + "\"");
        }
      } else if (*kind == "intercept_resend") {
        check_keys(a, "adversary", {"kind", "link"});
        if (auto link = get_string(a, "link"))
          cfg.adversary = AdversaryModel::intercept(*link);
        else
          fail("link", "intercept_resend needs a \"link\" (stage1|stage2|stage3)");
      } else {
        fail("kind", "unknown adversary kind \"" + *kind + "\"");
      }
    }
  }

  if (j.contains("coding")) {
    if (!j.at("coding").is_object()) {
      fail("coding", "\"coding\" must be an object");
    } else {
      const nj::json& c = j.at("coding");
      check_keys(c, "coding", {"enabled", "k"});
      if (auto e = get_bool(c, "enabled")) cfg.coding.enabled = *e;
      if (auto k = get_uint(c, "k")) {
        if (*k < 2)
          fail("k", "\"k\" must be >= 2 data shares");
        else
          cfg.coding.k = static_cast<int>(*k);
      }
    }
  }

  if (j.contains("trials")) {
    if (auto t = get_uint(j, "trials")) {
      if (*t >= 1)
        cfg.trials = static_cast<long>(*t);
      else
        fail("trials", "\"trials\" must be an integer >= 1");
    }
  }

  if (auto s = get_uint(j, "seed"))
    cfg.seed = *s;
  else if (!j.contains("seed"))
    fail("seed", "\"seed\" is required: runs never draw from the wall clock");

  if (auto b = get_bool(j, "per_bit_keys")) cfg.per_bit_keys = *b;

  // Cross-field rules, checked only once the fields themselves parsed.
  if (errs.empty()) {
    const bool quantum = cfg.variant == Variant::QuantumThreeStage;
    if (quantum != (cfg.family == Family::Rotation))
      fail("family", quantum ? "the quantum run takes the rotation family"
                             : "rotation keys require variant \"quantum_three_stage\"");
    if (cfg.family == Family::ModExp &&
        (cfg.variant == Variant::SplitPath || cfg.variant == Variant::ChainForward))
      fail("family", std::string("modexp is incompatible with ") + variant_name(cfg.variant) +
                         ": residues neither split into parts nor route through relay chains");
    if (cfg.variant == Variant::SplitPath && cfg.n % 2 != 0)
      fail("n", "split-path payload length must be even");
    if (cfg.coding.enabled) {
      if (cfg.variant != Variant::SplitPath || cfg.family != Family::Pad)
        fail("coding", "coding applies only to pad-family split-path scenarios");
      else if (cfg.n % static_cast<std::size_t>(cfg.coding.k) != 0)
        fail("k", "payload length must be a multiple of \"k\"");
    }
    if (cfg.per_bit_keys && !quantum) fail("per_bit_keys", "per-bit keys apply to the quantum run only");
    if (quantum && cfg.angles.uniform != cfg.per_bit_keys)
      fail("per_bit_keys", "\"angles\": \"uniform\" and \"per_bit_keys\": true imply each other");
    if (cfg.adversary.kind == AdversaryKind::InterceptResend) {
      if (!quantum)
        fail("adversary", "intercept-resend applies to the quantum run only");
      else if (cfg.adversary.link != "stage1" && cfg.adversary.link != "stage2" && cfg.adversary.link != "stage3")
        fail("link", "intercept-resend link must be stage1, stage2, or stage3");
    }
    if (cfg.adversary.kind == AdversaryKind::Mitm && quantum)
      fail("adversary", "mitm strategies are classical; the quantum run supports intercept-resend");
  }
  if (errs.empty()) {
    try {
      const Topology t = build_figure(cfg.figure, cfg.chain_length);
      cfg.adversary.check_against(t);
    } catch (const std::invalid_argument& e) {
      fail("adversary", e.what());
    }
  }

  if (!errs.empty()) throw ConfigParseError(std::move(errs));
  return cfg;
}

}  // namespace tristage
