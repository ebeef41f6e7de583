#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tristage/adversary.hpp"
#include "tristage/protocols.hpp"
#include "tristage/scenario.hpp"
#include "tristage/transcript.hpp"

namespace tristage {

// Everything one scenario run produces. The leakage report is always
// computed; serialization omits it when no adversary was configured, so a
// clean run's report has no adversary fields at all.
struct ScenarioReport {
  ScenarioConfig config;
  std::vector<std::uint8_t> success_flags;  // one per trial
  LeakageReport leakage;
  Transcript transcript0;  // full transcript of trial 0
  std::string digest;      // fingerprint over every trial's transcript records
  std::vector<std::string> property_violations;

  long success_count() const {
    long n = 0;
    for (std::uint8_t f : success_flags) n += f;
    return n;
  }

  nlohmann::json to_json(bool include_transcript = true) const {
    nlohmann::json j;
    j["config"] = config_json(config);
    std::string flags(success_flags.size(), '0');
    for (std::size_t i = 0; i < success_flags.size(); ++i)
      if (success_flags[i]) flags[i] = '1';
    j["success_flags"] = flags;
    j["success_count"] = success_count();
    j["trials"] = config.trials;
    if (config.adversary.kind != AdversaryKind::None) {
      j["leakage"] = nlohmann::json{{"adversary_guess_accuracy", leakage.adversary_guess_accuracy},
                                    {"receiver_error_rate", leakage.receiver_error_rate},
                                    {"detection_rate", leakage.detection_rate},
                                    {"trials", leakage.trials}};
    }
    if (include_transcript) {
      nlohmann::json events = nlohmann::json::array();
      for (const auto& e : transcript0.events) events.push_back(e.record());
      j["transcript_trial0"] = events;
    }
    j["transcript_digest"] = digest;
    if (!property_violations.empty()) j["property_violations"] = property_violations;
    return j;
  }
};

namespace detail {

inline Bits sample_payload(const ScenarioConfig& cfg, Rng& rng) {
  if (cfg.family == Family::ModExp) return modexp_payload(1 + rng.below(cfg.p - 1), cfg.p);
  return rng.bits(cfg.n);
}

inline Bits uniform_guess(const ScenarioConfig& cfg, Rng& rng) { return sample_payload(cfg, rng); }

// The stage payloads the adversary saw, keyed by event note. Only insecure
// wire crossings on observed links contribute; secure events have empty
// observables and are skipped outright.
inline std::map<std::string, Bits> observed_notes(const Topology& t, const AdversaryModel& adv,
                                                  const Transcript& tr) {
  std::map<std::string, Bits> out;
  for (const auto& e : tr.events) {
    if (e.secure) continue;
    if (!adv.observes(wire_id(t, e.from, e.to))) continue;
    out[e.note] = Bits::parse(e.observable);
  }
  return out;
}

// The adversary's best plaintext guess from what it observed, or nullopt
// when the observations leave the plaintext underdetermined (the caller
// then guesses uniformly over the domain, per the tie-break rule).
inline std::optional<Bits> recover_from_observation(const ScenarioConfig& cfg, const Topology& t,
                                                    const Transcript& tr, const AdversaryModel& adv) {
  const auto seen = observed_notes(t, adv, tr);
  auto have = [&](const char* k) { return seen.count(k) != 0; };
  switch (cfg.variant) {
    case Variant::ThreeStage:
    case Variant::ChainForward: {
      if (!have("stage1") || !have("stage2") || !have("stage3")) return std::nullopt;
      if (cfg.family == Family::Pad)
        return pad_passive_recover(seen.at("stage1"), seen.at("stage2"), seen.at("stage3"));
      if (cfg.p > kBruteforceMaxPrime) return std::nullopt;  // exhaustion refuses; fall back to guessing
      try {
        return modexp_payload(
            modexp_bruteforce(cfg.p, seen.at("stage1").value(), seen.at("stage2").value(), seen.at("stage3").value()),
            cfg.p);
      } catch (const std::exception&) {
        return std::nullopt;  // tampered or malformed stages: nothing consistent
      }
    }
    case Variant::TwoStage:
      // (c1, c2) = (kA(x), kB(kA(x))) leaves x fully underdetermined: every
      // plaintext is consistent with some key pair.
      return std::nullopt;
    case Variant::SplitPath: {
      auto gather = [&](const std::string& stem) -> std::optional<Bits> {
        if (auto it = seen.find(stem); it != seen.end()) return it->second;
        Bits acc;
        if (cfg.coding.enabled) {
          for (int i = 1; i <= cfg.coding.k; ++i) {
            auto it = seen.find(stem + " share " + std::to_string(i) + "/" + std::to_string(cfg.coding.k));
            if (it == seen.end()) return std::nullopt;
            acc.append(it->second);
          }
        } else {
          for (int i = 1; i <= 2; ++i) {
            auto it = seen.find(stem + " part " + std::to_string(i) + "/2");
            if (it == seen.end()) return std::nullopt;
            acc.append(it->second);
          }
        }
        return acc;
      };
      const auto c = gather("stage1");
      const auto e = gather("completion");
      if (!c || !e || !have("stage2")) return std::nullopt;
      // Same telescope as the three-stage attack: c ^ d ^ e = x.
      return *c ^ seen.at("stage2") ^ *e;
    }
    case Variant::QuantumThreeStage:
      return std::nullopt;  // qubit markers carry no bit information
  }
  return std::nullopt;
}

// Insecure stage events a clean run of this scenario must produce.
inline int expected_stage_events(const ScenarioConfig& cfg) {
  switch (cfg.variant) {
    case Variant::ThreeStage: return 3;
    case Variant::ChainForward: return 3;
    case Variant::TwoStage: return 2;
    case Variant::SplitPath: return cfg.coding.enabled ? cfg.coding.k + 1 : 3;
    case Variant::QuantumThreeStage: return 3;
  }
  return 0;
}

}  // namespace detail

// Runs the configured number of independent trials, each on its own rng
// stream derived from (seed, trial index), and aggregates by exact counts,
// so reports are identical for identical configs no matter how trials are
// scheduled.
inline ScenarioReport run_scenario(const ScenarioConfig& cfg) {
  ScenarioReport rep;
  rep.config = cfg;
  const Topology t = build_figure(cfg.figure, cfg.chain_length);
  const AdversaryModel& adv = cfg.adversary;
  const bool quantum = cfg.variant == Variant::QuantumThreeStage;
  const KeyParams params{cfg.n, cfg.p};

  long detect_count = 0, guess_hits = 0, error_trials = 0;
  std::uint64_t wrong_bits = 0, total_bits = 0, eve_bit_hits = 0;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  bool reported_roundtrip = false, reported_stage_count = false;

  for (long trial = 0; trial < cfg.trials; ++trial) {
    Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(trial));
    const Bits x = detail::sample_payload(cfg, rng);

    RunResult r;
    switch (cfg.variant) {
      case Variant::ThreeStage: {
        const TransformKey ka = sample_key(cfg.family, params, rng);
        const TransformKey kb = sample_key(cfg.family, params, rng);
        r = run_three_stage(ka, kb, x, adv);
        break;
      }
      case Variant::ChainForward: {
        const TransformKey ka = sample_key(cfg.family, params, rng);
        const TransformKey kb = sample_key(cfg.family, params, rng);
        r = run_chain_forward(t, ka, kb, x, adv);
        break;
      }
      case Variant::TwoStage: {
        const TransformKey ka = sample_key(cfg.family, params, rng);
        const TransformKey kb = sample_key(cfg.family, params, rng);
        r = run_two_stage(ka, kb, x, adv);
        break;
      }
      case Variant::SplitPath: {
        const TransformKey ka = sample_key(cfg.family, params, rng);
        const TransformKey kb = sample_key(cfg.family, params, rng);
        r = run_split_path(t, ka, kb, x, adv, SplitPathOptions{cfg.coding.enabled, cfg.coding.k});
        break;
      }
      case Variant::QuantumThreeStage:
        r = run_quantum_three_stage(cfg.angles.theta_a, cfg.angles.theta_b, x, adv, rng,
                                    QuantumOptions{cfg.per_bit_keys});
        break;
    }

    rep.success_flags.push_back(r.success ? 1 : 0);
    if (!r.success) ++error_trials;

    bool detected = false;
    if (quantum) {
      total_bits += x.size();
      for (std::size_t i = 0; i < x.size(); ++i)
        if (r.recovered.bit(i) != x.bit(i)) ++wrong_bits;
      detected = !(r.recovered == x);  // the bit train the parties would compare
      if (r.adversary_bits) {
        for (std::size_t i = 0; i < x.size(); ++i)
          if (r.adversary_bits->bit(i) == x.bit(i)) ++eve_bit_hits;
      } else if (adv.kind == AdversaryKind::Passive) {
        const Bits g = rng.bits(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
          if (g.bit(i) == x.bit(i)) ++eve_bit_hits;
      }
    } else {
      detected = r.detection.has_value();
      if (adv.kind == AdversaryKind::Passive || adv.kind == AdversaryKind::Mitm) {
        auto guess = detail::recover_from_observation(cfg, t, r.transcript, adv);
        if (!guess) guess = detail::uniform_guess(cfg, rng);
        if (*guess == x) ++guess_hits;
      }
    }
    if (detected) ++detect_count;

    if (adv.kind == AdversaryKind::None && !r.success && !reported_roundtrip) {
      rep.property_violations.push_back("trial " + std::to_string(trial) +
                                        ": no-adversary run failed to recover the plaintext");
      reported_roundtrip = true;
    }
    if (!r.detection && !reported_stage_count) {
      const int expect = detail::expected_stage_events(cfg);
      const int got = r.transcript.insecure_stage_count();
      if (got != expect) {
        rep.property_violations.push_back("trial " + std::to_string(trial) + ": " + std::to_string(got) +
                                          " insecure stage events, expected " + std::to_string(expect));
        reported_stage_count = true;
      }
    }

    h = fnv1a64(r.transcript.to_jsonl(), h);
    if (trial == 0) rep.transcript0 = r.transcript;
  }

  rep.digest = digest_hex(h);
  rep.leakage.trials = cfg.trials;
  if (quantum) {
    rep.leakage.receiver_error_rate = static_cast<double>(wrong_bits) / static_cast<double>(total_bits);
    rep.leakage.adversary_guess_accuracy =
        adv.kind == AdversaryKind::None ? 0.0 : static_cast<double>(eve_bit_hits) / static_cast<double>(total_bits);
  } else {
    rep.leakage.receiver_error_rate = static_cast<double>(error_trials) / static_cast<double>(cfg.trials);
    rep.leakage.adversary_guess_accuracy = static_cast<double>(guess_hits) / static_cast<double>(cfg.trials);
  }
  rep.leakage.detection_rate = static_cast<double>(detect_count) / static_cast<double>(cfg.trials);
  rep.leakage.check();
  return rep;
}

// Just the aggregate attack metrics of a scenario.
inline LeakageReport estimate_leakage(const ScenarioConfig& cfg) { return run_scenario(cfg).leakage; }

// Knobs for the multipath detection experiment. check_segment_bits > 0
// models the parties disclosing that many leading payload bits after the
// run and comparing them; 0 disables the disclosure.
struct MultipathOptions {
  std::size_t n = 8;  // payload bits
  bool parity = false;
  int shares = 2;
  int check_segment_bits = 0;
};

// Measures whether an actively tampering adversary gets caught, on the
// split-path geometry (redundant inbound paths plus optional parity) or on
// the single-wire three-stage baseline where no cross-check can exist.
// Pad family throughout: the detection story is about routing and
// redundancy, not the algebra of the masks.
inline LeakageReport mitm_multipath_detect(const Topology& t, Variant variant, const MultipathOptions& opt,
                                           const AdversaryModel& adv, long trials, Rng& rng) {
  if (variant != Variant::ThreeStage && variant != Variant::SplitPath)
    throw std::invalid_argument("multipath detection runs on split_path or the three_stage baseline");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (adv.kind != AdversaryKind::Mitm && adv.kind != AdversaryKind::None)
    throw std::invalid_argument("multipath detection takes a mitm adversary (or none as control)");

  ScenarioConfig probe;  // recover_from_observation keys off these fields
  probe.variant = variant;
  probe.family = Family::Pad;
  probe.n = opt.n;
  probe.coding.enabled = opt.parity;
  probe.coding.k = opt.shares;

  long detect_count = 0, guess_hits = 0, error_trials = 0;
  for (long trial = 0; trial < trials; ++trial) {
    const Bits x = rng.bits(opt.n);
    const TransformKey ka = TransformKey::pad(rng.bits(opt.n));
    const TransformKey kb = TransformKey::pad(rng.bits(opt.n));
    const RunResult r = variant == Variant::ThreeStage
                            ? run_three_stage(ka, kb, x, adv)
                            : run_split_path(t, ka, kb, x, adv, SplitPathOptions{opt.parity, opt.shares});

    bool detected = r.detection.has_value();
    if (!detected && opt.check_segment_bits > 0) {
      const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(opt.check_segment_bits), x.size());
      if (r.recovered.size() != x.size())
        detected = true;
      else
        for (std::size_t i = 0; i < k && !detected; ++i)
          if (r.recovered.bit(i) != x.bit(i)) detected = true;
    }
    if (detected) ++detect_count;
    if (!r.success) ++error_trials;
    if (adv.kind == AdversaryKind::Mitm) {
      auto guess = detail::recover_from_observation(probe, t, r.transcript, adv);
      if (!guess) guess = rng.bits(opt.n);
      if (*guess == x) ++guess_hits;
    }
  }

  LeakageReport lr;
  lr.trials = trials;
  lr.detection_rate = static_cast<double>(detect_count) / static_cast<double>(trials);
  lr.receiver_error_rate = static_cast<double>(error_trials) / static_cast<double>(trials);
  lr.adversary_guess_accuracy = static_cast<double>(guess_hits) / static_cast<double>(trials);
  lr.check();
  return lr;
}

}  // namespace tristage
