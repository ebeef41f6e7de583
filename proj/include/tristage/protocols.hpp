#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tristage/adversary.hpp"
#include "tristage/bits.hpp"
#include "tristage/coding.hpp"
#include "tristage/qubit.hpp"
#include "tristage/rng.hpp"
#include "tristage/topology.hpp"
#include "tristage/transcript.hpp"
#include "tristage/transforms.hpp"

namespace tristage {

// Outcome of one protocol run. recovered/success describe the receiving
// party's final output. detection is set when a receiver-side integrity
// check fired (share parity mismatch, out-of-domain ciphertext); the run
// aborts at that point and recovered stays empty. adversary_bits carries
// an intercept-resend attacker's measured bits for leakage accounting.
struct RunResult {
  Bits recovered;
  bool success = false;
  Transcript transcript;
  std::optional<std::string> detection;
  std::optional<Bits> adversary_bits;
};

namespace detail {

// Active tap on one insecure wire. Substitute and FlipBit fire at most
// once per run; FlipBit indexes into the concatenation of everything that
// crosses the wire, in order.
class MitmTap {
 public:
  explicit MitmTap(const AdversaryModel& adv) : adv_(&adv) {}

  Bits deliver(const std::string& wire, const Bits& sent) {
    if (adv_->kind != AdversaryKind::Mitm || wire != adv_->link) return sent;
    Bits out = sent;
    switch (adv_->strategy) {
      case MitmStrategy::Relay:
        break;
      case MitmStrategy::Substitute:
        if (!fired_) {
          if (adv_->substitute_payload.size() != sent.size())
            throw std::invalid_argument("mitm substitute: payload length mismatch on wire " + wire);
          out = adv_->substitute_payload;
          fired_ = true;
        }
        break;
      case MitmStrategy::FlipBit:
        if (!fired_ && adv_->flip_bit_index >= seen_ && adv_->flip_bit_index < seen_ + sent.size()) {
          out.flip(static_cast<std::size_t>(adv_->flip_bit_index - seen_));
          fired_ = true;
        }
        break;
    }
    seen_ += sent.size();
    return out;
  }

 private:
  const AdversaryModel* adv_;
  std::uint64_t seen_ = 0;
  bool fired_ = false;
};

// Canonical wire id for a traversal: an undirected link keeps one id for
// both directions, so taps and observers configured with the topology's
// link id match the return traffic too.
inline std::string wire_id(const Topology& t, const std::string& from, const std::string& to) {
  for (const auto& l : t.links) {
    if (l.secure) continue;
    if (l.from == from && l.to == to) return l.id();
    if (!l.directed && l.from == to && l.to == from) return l.id();
  }
  throw std::logic_error("no insecure wire " + from + "->" + to);
}

inline void log_event(Transcript& tr, std::string from, std::string to, bool secure, std::string observable,
                      std::string note, std::string hidden) {
  tr.add(TranscriptEvent{static_cast<int>(tr.events.size()) + 1, std::move(from), std::move(to), secure,
                         std::move(observable), std::move(note), std::move(hidden)});
}

inline void log_secure(Transcript& tr, std::string from, std::string to, std::string note, std::string hidden) {
  log_event(tr, std::move(from), std::move(to), true, "", std::move(note), std::move(hidden));
}

// Emits one insecure-wire crossing and returns the payload as delivered,
// which is what the receiving side gets to see after any tampering.
inline Bits send_insecure(Transcript& tr, MitmTap& tap, const Topology& t, const std::string& from,
                          const std::string& to, const Bits& payload, std::string note) {
  const Bits delivered = tap.deliver(wire_id(t, from, to), payload);
  log_event(tr, from, to, false, delivered.str(), std::move(note), "");
  return delivered;
}

inline std::string key_hidden(const char* label, const TransformKey& k) {
  switch (k.family()) {
    case Family::Pad: return std::string(label) + "=pad:" + k.as_pad().pad.str();
    case Family::ModExp: return std::string(label) + "=modexp:e=" + std::to_string(k.as_modexp().e);
    case Family::Rotation: return std::string(label) + "=rotation";
  }
  return label;
}

// Shared preconditions of the classical engines: same-family same-parameter
// keys (the structural guarantee of commutation), a payload in the family's
// domain, and a classical-capable adversary.
inline void check_classical_run(const TransformKey& ka, const TransformKey& kb, const Bits& x,
                                const AdversaryModel& adv) {
  if (ka.family() == Family::Rotation || kb.family() == Family::Rotation)
    throw std::invalid_argument("rotation keys drive the quantum run, not classical payloads");
  if (ka.family() != kb.family() || !ka.same_params(kb))
    throw std::invalid_argument("keys do not commute: family or structural parameter mismatch");
  if (ka.family() == Family::Pad) {
    if (ka.as_pad().pad.size() != x.size())
      throw std::invalid_argument("payload length does not match the pad keys");
  } else {
    const ModExpKey& k = ka.as_modexp();
    if (x.size() != modexp_width(k.p))
      throw std::invalid_argument("modexp payload must be exactly " + std::to_string(modexp_width(k.p)) + " bits wide");
    const std::uint64_t v = x.value();
    if (v < 1 || v > k.p - 1) throw std::invalid_argument("modexp payload must lie in [1, p-1]");
  }
  if (adv.kind == AdversaryKind::InterceptResend)
    throw std::invalid_argument("intercept-resend measures qubits; classical runs carry none");
}

// Receiver-side transform application. Tampering can push a ModExp
// ciphertext outside [1, p-1]; the receiver rejects that as a detected
// anomaly instead of processing garbage.
inline std::optional<Bits> receive_apply(const TransformKey& key, const Bits& delivered, const std::string& site,
                                         std::optional<std::string>& detection) {
  try {
    return apply(key, delivered);
  } catch (const std::invalid_argument&) {
    detection = site + " rejected out-of-domain ciphertext";
    return std::nullopt;
  }
}

// The forward chain's location sequence, validated: directed insecure
// links forming one path, no branches, alternating owners, at least three
// hops so each stage gets its own link.
inline std::vector<std::string> chain_nodes(const Topology& t) {
  auto bad = [](const std::string& why) { return std::invalid_argument("topology is not chain-forward: " + why); };
  std::map<std::string, std::string> succ;
  std::map<std::string, int> indeg;
  for (const auto& l : t.links) {
    if (l.secure) continue;
    if (!l.directed) throw bad("insecure link " + l.id() + " is undirected");
    if (succ.count(l.from)) throw bad("branching at " + l.from);
    succ[l.from] = l.to;
    indeg[l.from];
    ++indeg[l.to];
  }
  std::string src;
  for (const auto& [id, d] : indeg)
    if (d == 0 && succ.count(id)) {
      if (!src.empty()) throw bad("multiple chain sources");
      src = id;
    }
  if (src.empty()) throw bad("no chain source");
  std::vector<std::string> order{src};
  while (succ.count(order.back())) {
    order.push_back(succ[order.back()]);
    if (order.size() > t.locations.size()) throw bad("cycle");
  }
  if (order.size() < 4) throw bad("need at least 3 forward links, one per stage");
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    const Location* a = t.find_location(order[i]);
    const Location* b = t.find_location(order[i + 1]);
    if (!a || !b) throw bad("link endpoint missing from location list");
    if (a->owner == b->owner) throw bad("owners do not alternate at " + order[i]);
  }
  return order;
}

// The split-path cast: hub b with two inbound wires, a return site fed by
// b's outbound wire, and an origin among the inbound senders that has
// secure relays to both other sites.
struct SplitGeometry {
  std::vector<std::string> inbound_src;  // lexicographic, which is also wire-id order
  std::string origin;
  std::string ret;
  std::string b;
};

inline SplitGeometry split_path_geometry(const Topology& t) {
  auto bad = [](const std::string& why) { return std::invalid_argument("topology is not split-path: " + why); };
  const auto ins = t.insecure_links();
  if (ins.size() != 3) throw bad("expected exactly 3 insecure links");
  std::map<std::string, int> inbound;
  for (const Link* l : ins) {
    if (!l->directed) throw bad("insecure link " + l->id() + " is undirected");
    ++inbound[l->to];
  }
  SplitGeometry g;
  for (const auto& [id, n] : inbound)
    if (n == 2) {
      if (!g.b.empty()) throw bad("ambiguous hub");
      g.b = id;
    }
  if (g.b.empty()) throw bad("no location receives two inbound wires");
  for (const Link* l : ins) {
    if (l->to == g.b)
      g.inbound_src.push_back(l->from);
    else if (l->from == g.b)
      g.ret = l->to;
    else
      throw bad("stray insecure link " + l->id());
  }
  if (g.ret.empty()) throw bad("missing return wire from the hub");
  std::sort(g.inbound_src.begin(), g.inbound_src.end());
  if (g.inbound_src[0] == g.inbound_src[1]) throw bad("inbound wires share a source");
  if (g.ret == g.inbound_src[0] || g.ret == g.inbound_src[1] || g.ret == g.b)
    throw bad("return site must be a distinct location");
  auto secure_between = [&](const std::string& u, const std::string& v) {
    for (const auto& l : t.links)
      if (l.secure && ((l.from == u && l.to == v) || (l.from == v && l.to == u))) return true;
    return false;
  };
  for (const auto& cand : g.inbound_src) {
    const std::string& other = (cand == g.inbound_src[0]) ? g.inbound_src[1] : g.inbound_src[0];
    if (secure_between(cand, other) && secure_between(cand, g.ret)) {
      g.origin = cand;
      break;
    }
  }
  if (g.origin.empty()) throw bad("no inbound sender has secure relays to the other sites");
  return g;
}

}  // namespace detail

// Three-stage round trip on the two-location geometry: A and B each mask
// with their own key and strip it one round later, so the plaintext never
// crosses the wire unmasked and no key material is exchanged.
inline RunResult run_three_stage(const TransformKey& ka, const TransformKey& kb, const Bits& x,
                                 const AdversaryModel& adv = AdversaryModel::none()) {
  detail::check_classical_run(ka, kb, x, adv);
  const Topology t = build_figure(Figure::Fig2);
  adv.check_against(t);

  RunResult r;
  detail::MitmTap tap(adv);
  const Bits d1 = detail::send_insecure(r.transcript, tap, t, "A", "B", apply(ka, x), "stage1");
  const auto c2 = detail::receive_apply(kb, d1, "B", r.detection);
  if (!c2) return r;
  const Bits d2 = detail::send_insecure(r.transcript, tap, t, "B", "A", *c2, "stage2");
  const auto c3 = detail::receive_apply(invert_key(ka), d2, "A", r.detection);
  if (!c3) return r;
  const Bits d3 = detail::send_insecure(r.transcript, tap, t, "A", "B", *c3, "stage3");
  const auto out = detail::receive_apply(invert_key(kb), d3, "B", r.detection);
  if (!out) return r;
  r.recovered = *out;
  r.success = (r.recovered == x);
  return r;
}

// The same three stages, each on its own forward link of an interlaced
// chain. Keys travel only over intra-party secure links, recorded as
// key-relay events with empty observables.
inline RunResult run_chain_forward(const Topology& t, const TransformKey& ka, const TransformKey& kb, const Bits& x,
                                   const AdversaryModel& adv = AdversaryModel::none()) {
  if (ka.family() != Family::Pad || kb.family() != Family::Pad)
    throw std::invalid_argument("chain-forward runs the pad family only");
  detail::check_classical_run(ka, kb, x, adv);
  const auto nodes = detail::chain_nodes(t);
  adv.check_against(t);

  RunResult r;
  detail::MitmTap tap(adv);
  const Bits d1 = detail::send_insecure(r.transcript, tap, t, nodes[0], nodes[1], apply(ka, x), "stage1");
  const auto c2 = detail::receive_apply(kb, d1, nodes[1], r.detection);
  if (!c2) return r;
  const Bits d2 = detail::send_insecure(r.transcript, tap, t, nodes[1], nodes[2], *c2, "stage2");
  detail::log_secure(r.transcript, nodes[0], nodes[2], "key-relay", detail::key_hidden("kA", ka));
  const auto c3 = detail::receive_apply(invert_key(ka), d2, nodes[2], r.detection);
  if (!c3) return r;
  const Bits d3 = detail::send_insecure(r.transcript, tap, t, nodes[2], nodes[3], *c3, "stage3");
  detail::log_secure(r.transcript, nodes[1], nodes[3], "key-relay", detail::key_hidden("kB", kb));
  const auto out = detail::receive_apply(invert_key(kb), d3, nodes[3], r.detection);
  if (!out) return r;
  r.recovered = *out;
  r.success = (r.recovered == x);
  return r;
}

// Two-stage reduction: the second A location already knows kA (relayed
// securely), and B's second agent is co-located there, so one wire
// crossing disappears. The A2-to-B2 hand-off is a co-location, not a
// wire; it appears in the transcript with nothing observable.
inline RunResult run_two_stage(const TransformKey& ka, const TransformKey& kb, const Bits& x,
                               const AdversaryModel& adv = AdversaryModel::none()) {
  detail::check_classical_run(ka, kb, x, adv);
  const Topology t = build_figure(Figure::Fig5);
  adv.check_against(t);

  RunResult r;
  detail::MitmTap tap(adv);
  const Bits d1 = detail::send_insecure(r.transcript, tap, t, "A1", "B1", apply(ka, x), "stage1");
  detail::log_secure(r.transcript, "A1", "A2", "key-relay", detail::key_hidden("kA", ka));
  const auto c2 = detail::receive_apply(kb, d1, "B1", r.detection);
  if (!c2) return r;
  const Bits d2 = detail::send_insecure(r.transcript, tap, t, "B1", "A2", *c2, "stage2");
  const auto stripped = detail::receive_apply(invert_key(ka), d2, "A2", r.detection);
  if (!stripped) return r;
  detail::log_secure(r.transcript, "A2", "B2", "hand-off", "payload=" + stripped->str());
  detail::log_secure(r.transcript, "B1", "B2", "key-relay", detail::key_hidden("kB", kb));
  const auto out = detail::receive_apply(invert_key(kb), *stripped, "B2", r.detection);
  if (!out) return r;
  r.recovered = *out;
  r.success = (r.recovered == x);
  return r;
}

struct SplitPathOptions {
  bool parity = false;  // xor-parity coding on every inbound leg
  int shares = 2;       // data shares per coded leg
};

// Split-path run: the masked payload reaches the hub in parts over two
// inbound wires, comes back transformed through the return site, and the
// finished value crosses an inbound wire once more to complete decryption
// (the hub's geometry has no other way back). With parity enabled, every
// inbound leg carries xor-parity shares and the hub verifies each leg
// before using it; a mismatch aborts the run with detection set.
inline RunResult run_split_path(const Topology& t, const TransformKey& ka, const TransformKey& kb, const Bits& x,
                                const AdversaryModel& adv = AdversaryModel::none(),
                                const SplitPathOptions& opts = {}) {
  if (ka.family() != Family::Pad || kb.family() != Family::Pad)
    throw std::invalid_argument("split-path runs the pad family only: residues do not split into parts");
  detail::check_classical_run(ka, kb, x, adv);
  if (x.size() % 2 != 0) throw std::invalid_argument("split-path payload length must be even");
  if (opts.parity) {
    if (opts.shares < 2) throw std::invalid_argument("coding needs at least 2 data shares");
    if (x.size() % opts.shares != 0)
      throw std::invalid_argument("payload length must be a multiple of the share count");
  }
  const detail::SplitGeometry geo = detail::split_path_geometry(t);
  adv.check_against(t);

  RunResult r;
  detail::MitmTap tap(adv);

  struct LegItem {
    Bits payload;
    std::string note;
  };

  // One leg toward the hub: items round-robin over the inbound wires,
  // starting at the lexicographically first; shares the origin does not
  // send itself are relayed to their sender over secure links first.
  auto send_leg = [&](const std::vector<LegItem>& items) {
    std::vector<Bits> delivered;
    for (std::size_t j = 0; j < items.size(); ++j) {
      const std::string& sender = geo.inbound_src[j % geo.inbound_src.size()];
      if (sender != geo.origin)
        detail::log_secure(r.transcript, geo.origin, sender, "share-relay", "payload=" + items[j].payload.str());
      delivered.push_back(detail::send_insecure(r.transcript, tap, t, sender, geo.b, items[j].payload, items[j].note));
    }
    return delivered;
  };

  // Hub-side reassembly; with parity on, the leg is rejected wholesale on
  // any parity mismatch (one parity share locates nothing, so there is no
  // correction to attempt).
  auto receive_leg = [&](const std::vector<Bits>& delivered, const char* what) -> std::optional<Bits> {
    if (!opts.parity) {
      Bits out;
      for (const Bits& d : delivered) out.append(d);
      return out;
    }
    ShareSet ss;
    for (int i = 0; i < opts.shares; ++i) ss.data_shares.emplace_back(delivered[i]);
    ss.parity = delivered[static_cast<std::size_t>(opts.shares)];
    if (!verify_parity(ss)) {
      r.detection = std::string(what) + " parity mismatch at " + geo.b;
      return std::nullopt;
    }
    return reconstruct(ss);
  };

  auto leg_items = [&](const Bits& payload, const std::string& stage_note, const std::string& parity_note,
                       bool halves_when_uncoded) {
    std::vector<LegItem> items;
    if (opts.parity) {
      ShareSet ss = split(payload, opts.shares);
      for (int i = 0; i < opts.shares; ++i)
        items.push_back({*ss.data_shares[i],
                         stage_note + " share " + std::to_string(i + 1) + "/" + std::to_string(opts.shares)});
      items.push_back({*ss.parity, parity_note});
    } else if (halves_when_uncoded) {
      const std::size_t half = payload.size() / 2;
      items.push_back({payload.slice(0, half), stage_note + " part 1/2"});
      items.push_back({payload.slice(half, half), stage_note + " part 2/2"});
    } else {
      items.push_back({payload, stage_note});
    }
    return items;
  };

  const Bits c = apply(ka, x);
  const auto c_recv = receive_leg(send_leg(leg_items(c, "stage1", "parity-share", true)), "stage1");
  if (!c_recv) return r;

  const auto d = detail::receive_apply(kb, *c_recv, geo.b, r.detection);
  if (!d) return r;
  const Bits d_recv = detail::send_insecure(r.transcript, tap, t, geo.b, geo.ret, *d, "stage2");

  const auto e = detail::receive_apply(invert_key(ka), d_recv, geo.ret, r.detection);
  if (!e) return r;
  detail::log_secure(r.transcript, geo.ret, geo.origin, "return-relay", "payload=" + e->str());

  const auto e_recv = receive_leg(send_leg(leg_items(*e, "completion", "completion-parity", false)), "completion");
  if (!e_recv) return r;

  const auto out = detail::receive_apply(invert_key(kb), *e_recv, geo.b, r.detection);
  if (!out) return r;
  r.recovered = *out;
  r.success = (r.recovered == x);
  return r;
}

struct QuantumOptions {
  bool per_bit_angles = false;  // fresh uniform rotation keys for every bit
};

// Quantum three-stage run over the two-location geometry: per bit, encode,
// rotate by thetaA, bounce through B's thetaB, strip thetaA, strip thetaB,
// measure. Rotations commute, so an undisturbed train measures back to the
// sent bits exactly. An intercept-resend adversary measures every qubit on
// one stage leg ("stage1".."stage3") and forwards the collapsed state; its
// measured bits come back in adversary_bits. The transcript carries one
// event per stage whose observable is only a qubit-train marker: the wire
// shows qubits in flight, never amplitudes.
inline RunResult run_quantum_three_stage(double theta_a, double theta_b, const Bits& bits, const AdversaryModel& adv,
                                         Rng& rng, const QuantumOptions& opts = {}) {
  if (bits.empty()) throw std::invalid_argument("quantum run: bit train is empty");
  if (adv.kind == AdversaryKind::Mitm)
    throw std::invalid_argument("mitm strategies are classical; qubit traffic supports intercept-resend");
  int tap_stage = -1;
  if (adv.kind == AdversaryKind::InterceptResend) {
    const char* stage_links[3] = {"stage1", "stage2", "stage3"};
    for (int i = 0; i < 3; ++i)
      if (adv.link == stage_links[i]) tap_stage = i;
    if (tap_stage < 0) throw std::invalid_argument("intercept-resend link must be one of stage1|stage2|stage3");
  }

  RunResult r;
  Bits out(bits.size());
  Bits eve(bits.size());
  auto intercept = [&](QubitState s, std::size_t i) {
    const Measurement m = measure(s, rng);
    eve.set(i, m.bit);
    return m.state;
  };
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const double ta = opts.per_bit_angles ? rng.angle() : theta_a;
    const double tb = opts.per_bit_angles ? rng.angle() : theta_b;
    QubitState s = rotate(encode_bit(bits.bit(i)), ta);
    if (tap_stage == 0) s = intercept(s, i);
    s = rotate(s, tb);
    if (tap_stage == 1) s = intercept(s, i);
    s = rotate(s, -ta);
    if (tap_stage == 2) s = intercept(s, i);
    s = rotate(s, -tb);
    out.set(i, measure(s, rng).bit);
  }
  const std::string marker = "qubits:" + std::to_string(bits.size());
  detail::log_event(r.transcript, "A", "B", false, marker, "stage1", "bits=" + bits.str());
  detail::log_event(r.transcript, "B", "A", false, marker, "stage2", "");
  detail::log_event(r.transcript, "A", "B", false, marker, "stage3", "");
  r.recovered = out;
  r.success = (r.recovered == bits);
  if (tap_stage >= 0) r.adversary_bits = eve;
  return r;
}

}  // namespace tristage
