#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tristage/bits.hpp"
#include "tristage/constants.hpp"
#include "tristage/modmath.hpp"
#include "tristage/qubit.hpp"
#include "tristage/rng.hpp"
#include "tristage/topology.hpp"

namespace tristage {

enum class AdversaryKind { None, Passive, Mitm, InterceptResend };

// What an active man-in-the-middle does with traffic on its link.
//   Relay       forwards unchanged (pure observation)
//   Substitute  replaces the first in-flight payload with a fixed one
//   FlipBit     flips one bit, indexed into the concatenation of all
//               traffic crossing the link during the run
// Substitute and FlipBit are one-shot: a single tampering event per run,
// which is what makes "every 1-bit substitution" enumerable.
enum class MitmStrategy { Relay, Substitute, FlipBit };

// Eavesdropper specification. Passive observes a set of insecure links (or
// all of them); Mitm observes and tampers on one link; InterceptResend
// measures every qubit crossing one stage link and forwards the collapsed
// state. Links are referenced by "from->to" ids; the quantum run uses the
// stage ids "stage1".."stage3".
struct AdversaryModel {
  AdversaryKind kind = AdversaryKind::None;
  std::vector<std::string> links;  // Passive: observed set (empty = observes nothing)
  bool all_links = false;          // Passive: observe every insecure link
  std::string link;                // Mitm / InterceptResend: the tapped link
  MitmStrategy strategy = MitmStrategy::Relay;
  Bits substitute_payload;
  std::size_t flip_bit_index = 0;

  static AdversaryModel none() { return {}; }

  static AdversaryModel passive_all() {
    AdversaryModel a;
    a.kind = AdversaryKind::Passive;
    a.all_links = true;
    return a;
  }

  static AdversaryModel passive(std::vector<std::string> observed) {
    AdversaryModel a;
    a.kind = AdversaryKind::Passive;
    a.links = std::move(observed);
    return a;
  }

  static AdversaryModel mitm_relay(std::string link) {
    AdversaryModel a;
    a.kind = AdversaryKind::Mitm;
    a.link = std::move(link);
    return a;
  }

  static AdversaryModel mitm_substitute(std::string link, Bits payload) {
    AdversaryModel a;
    a.kind = AdversaryKind::Mitm;
    a.link = std::move(link);
    a.strategy = MitmStrategy::Substitute;
    a.substitute_payload = std::move(payload);
    return a;
  }

  static AdversaryModel mitm_flip(std::string link, std::size_t bit_index) {
    AdversaryModel a;
    a.kind = AdversaryKind::Mitm;
    a.link = std::move(link);
    a.strategy = MitmStrategy::FlipBit;
    a.flip_bit_index = bit_index;
    return a;
  }

  static AdversaryModel intercept(std::string link) {
    AdversaryModel a;
    a.kind = AdversaryKind::InterceptResend;
    a.link = std::move(link);
    return a;
  }

  friend bool operator==(const AdversaryModel&, const AdversaryModel&) = default;

  bool observes(const std::string& link_id) const {
    switch (kind) {
      case AdversaryKind::None: return false;
      case AdversaryKind::Passive:
        return all_links || std::find(links.begin(), links.end(), link_id) != links.end();
      case AdversaryKind::Mitm:
      case AdversaryKind::InterceptResend:
        return link == link_id;
    }
    return false;
  }

  // Every referenced link must exist in the topology and be insecure;
  // secure links are invisible to adversaries by definition.
  void check_against(const Topology& t) const {
    auto check_one = [&](const std::string& id) {
      const Link* l = t.find_link(id);
      if (!l) throw std::invalid_argument("adversary references unknown link " + id);
      if (l->secure) throw std::invalid_argument("adversary cannot observe secure link " + id);
    };
    if (kind == AdversaryKind::Passive && !all_links)
      for (const auto& id : links) check_one(id);
    if (kind == AdversaryKind::Mitm) check_one(link);
  }
};

// Fraction metrics aggregated over independent trials. receiver_error_rate
// is per-bit for quantum runs and per-trial for classical ones.
struct LeakageReport {
  double adversary_guess_accuracy = 0.0;
  double receiver_error_rate = 0.0;
  double detection_rate = 0.0;
  long trials = 0;

  void check() const {
    auto frac = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!frac(adversary_guess_accuracy) || !frac(receiver_error_rate) || !frac(detection_rate))
      throw std::logic_error("LeakageReport: fraction out of [0,1]");
    if (trials < 1) throw std::logic_error("LeakageReport: trials must be >= 1");
  }
};

// The three-stage combination attack against the Pad family. A passive
// observer of all three stages computes
//   c1 ^ c2 ^ c3 = (x^a) ^ (x^a^b) ^ (x^b) = x
// which is the measured limit of the protocol's per-bit-entropy argument
// for this classical instantiation.
inline Bits pad_passive_recover(const Bits& c1, const Bits& c2, const Bits& c3) {
  if (c1.size() != c2.size() || c2.size() != c3.size())
    throw std::invalid_argument("pad_passive_recover: stage length mismatch");
  return c1 ^ c2 ^ c3;
}

// Desk-scale exhaustion attack on a ModExp three-stage transcript
// (c1, c2, c3) = (x^eA, x^(eA*eB), x^eB) mod p. Searches candidate
// plaintexts and unit exponents consistent with all three stage equations
// and returns the smallest consistent plaintext. Demonstrates that small
// parameters show mechanics, not security.
inline std::uint64_t modexp_bruteforce(std::uint64_t p, std::uint64_t c1, std::uint64_t c2, std::uint64_t c3) {
  if (!is_prime(p) || p < 5) throw std::invalid_argument("modexp_bruteforce: p must be a prime >= 5");
  if (p > kBruteforceMaxPrime) throw std::invalid_argument("modexp_bruteforce: p above desk-scale bound");
  for (std::uint64_t v : {c1, c2, c3})
    if (v < 1 || v > p - 1) throw std::invalid_argument("modexp_bruteforce: stage value outside [1, p-1]");

  // A candidate x is consistent iff some unit a gives x^a = c1 and some
  // unit b gives both x^b = c3 and c1^b = c2 (the stage-2 relation). The
  // two exponent searches are independent, so one incremental pass over
  // the powers of x settles both.
  const std::uint64_t m = p - 1;
  std::vector<std::uint8_t> unit(m, 0);
  std::vector<std::uint64_t> c1_pow(m, 1);
  for (std::uint64_t j = 1; j < m; ++j) {
    unit[j] = is_unit_mod(j, m);
    c1_pow[j] = mulmod(c1_pow[j - 1], c1, p);
  }
  for (std::uint64_t x = 1; x <= p - 1; ++x) {
    bool found_a = false, found_b = false;
    std::uint64_t xj = 1;
    for (std::uint64_t j = 1; j < m && !(found_a && found_b); ++j) {
      xj = mulmod(xj, x, p);
      if (!unit[j]) continue;
      if (xj == c1) found_a = true;
      if (xj == c3 && c1_pow[j] == c2) found_b = true;
    }
    if (found_a && found_b) return x;  // ascending scan, so the first hit is the smallest
  }
  throw std::runtime_error("modexp_bruteforce: no consistent plaintext (malformed transcript)");
}

// Computational-basis intercept-resend: measure the in-flight qubit and
// forward the collapsed state. The recorded bit is the basis index of the
// returned state.
inline QubitState intercept_resend(const QubitState& s, Rng& rng) { return measure(s, rng).state; }

}  // namespace tristage
