#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

#include "tristage/bits.hpp"
#include "tristage/constants.hpp"
#include "tristage/modmath.hpp"
#include "tristage/rng.hpp"

namespace tristage {

// The three commuting transform families. Two keys of the same family (with
// the same structural parameters) always commute:
//   Pad      f(x) = x xor pad            (bitwise, self-inverse)
//   ModExp   f(x) = x^e mod p            (p prime, e a unit mod p-1)
//   Rotation f(s) = R(theta) s           (planar rotation of a qubit state)
// Pad and ModExp act on classical payloads; Rotation acts on qubit states
// through the qubit module and is rejected by apply() below.
enum class Family { Pad, ModExp, Rotation };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Pad: return "pad";
    case Family::ModExp: return "modexp";
    case Family::Rotation: return "rotation";
  }
  return "?";
}

inline double canonical_angle(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("rotation angle must be finite");
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  if (t >= kTwoPi) t = 0;  // fmod can land exactly on 2*pi
  return t;
}

struct PadKey {
  Bits pad;
};

struct ModExpKey {
  std::uint64_t p = 0;  // prime modulus
  std::uint64_t e = 0;  // exponent, unit mod p-1
};

struct RotationKey {
  double theta = 0;  // radians, canonical [0, 2*pi)
};

// Family-tagged secret implementing one commuting transform.
class TransformKey {
 public:
  static TransformKey pad(Bits pad_bits) {
    if (pad_bits.empty()) throw std::invalid_argument("pad key: empty pad");
    return TransformKey(PadKey{std::move(pad_bits)});
  }

  static TransformKey modexp(std::uint64_t p, std::uint64_t e) {
    if (!is_prime(p) || p < 5) throw std::invalid_argument("modexp key: p must be a prime >= 5");
    if (e < 1 || e >= p - 1 || !is_unit_mod(e, p - 1))
      throw std::invalid_argument("modexp key: exponent must satisfy 1 <= e < p-1 and gcd(e, p-1) = 1");
    return TransformKey(ModExpKey{p, e});
  }

  static TransformKey rotation(double theta) { return TransformKey(RotationKey{canonical_angle(theta)}); }

  Family family() const {
    if (std::holds_alternative<PadKey>(k_)) return Family::Pad;
    if (std::holds_alternative<ModExpKey>(k_)) return Family::ModExp;
    return Family::Rotation;
  }

  const PadKey& as_pad() const { return expect<PadKey>("pad"); }
  const ModExpKey& as_modexp() const { return expect<ModExpKey>("modexp"); }
  const RotationKey& as_rotation() const { return expect<RotationKey>("rotation"); }

  // Keys have the same structural parameters when they act on the same
  // domain: equal pad length, equal modulus, or both rotations.
  bool same_params(const TransformKey& other) const {
    if (family() != other.family()) return false;
    switch (family()) {
      case Family::Pad: return as_pad().pad.size() == other.as_pad().pad.size();
      case Family::ModExp: return as_modexp().p == other.as_modexp().p;
      case Family::Rotation: return true;
    }
    return false;
  }

 private:
  template <typename K>
  const K& expect(const char* what) const {
    const K* k = std::get_if<K>(&k_);
    if (!k) throw std::logic_error(std::string("key is not of family ") + what);
    return *k;
  }

  explicit TransformKey(std::variant<PadKey, ModExpKey, RotationKey> k) : k_(std::move(k)) {}
  std::variant<PadKey, ModExpKey, RotationKey> k_;
};

// Structural parameters for key sampling: n for Pad, p for ModExp,
// nothing for Rotation.
struct KeyParams {
  std::size_t n = 0;
  std::uint64_t p = 0;
};

// Uniform sampling over the valid keys of a family. Parties are expected to
// draw a fresh key per message (per bit for the quantum run, when enabled).
inline TransformKey sample_key(Family family, const KeyParams& params, Rng& rng) {
  switch (family) {
    case Family::Pad:
      if (params.n == 0) throw std::invalid_argument("sample_key: pad length n must be >= 1");
      return TransformKey::pad(rng.bits(params.n));
    case Family::ModExp: {
      if (!is_prime(params.p) || params.p < 5) throw std::invalid_argument("sample_key: p must be a prime >= 5");
      const std::uint64_t m = params.p - 1;
      std::uint64_t e;
      do {
        e = 1 + rng.below(m - 1);  // [1, p-2]
      } while (!is_unit_mod(e, m));
      return TransformKey::modexp(params.p, e);
    }
    case Family::Rotation:
      return TransformKey::rotation(rng.angle());
  }
  throw std::logic_error("sample_key: unknown family");
}

// Payload width used for ModExp residues: enough bits for any value in [1, p-1].
inline std::size_t modexp_width(std::uint64_t p) { return bit_width_of(p - 1); }

inline Bits modexp_payload(std::uint64_t value, std::uint64_t p) {
  if (value < 1 || value > p - 1) throw std::invalid_argument("modexp payload must lie in [1, p-1]");
  return Bits::from_value(value, modexp_width(p));
}

// Applies a classical transform. Rotation keys act on qubit states, not
// payloads, and are rejected here.
inline Bits apply(const TransformKey& key, const Bits& x) {
  switch (key.family()) {
    case Family::Pad: {
      const Bits& pad = key.as_pad().pad;
      if (pad.size() != x.size())
        throw std::invalid_argument("apply: pad/payload length mismatch (" + std::to_string(pad.size()) + " vs " + std::to_string(x.size()) + ")");
      return x ^ pad;
    }
    case Family::ModExp: {
      const ModExpKey& k = key.as_modexp();
      const std::uint64_t v = x.value();
      if (v == 0) throw std::invalid_argument("apply: modexp payload 0 has no multiplicative structure");
      if (v > k.p - 1) throw std::invalid_argument("apply: modexp payload exceeds p-1");
      return Bits::from_value(powmod(v, k.e, k.p), modexp_width(k.p));
    }
    case Family::Rotation:
      throw std::invalid_argument("apply: rotation keys act on qubit states, not payloads");
  }
  throw std::logic_error("apply: unknown family");
}

// Key k' with apply(k', apply(k, x)) = x on all valid x.
inline TransformKey invert_key(const TransformKey& key) {
  switch (key.family()) {
    case Family::Pad:
      return key;  // xor is self-inverse
    case Family::ModExp: {
      const ModExpKey& k = key.as_modexp();
      return TransformKey::modexp(k.p, modinv(k.e, k.p - 1));
    }
    case Family::Rotation:
      return TransformKey::rotation(-key.as_rotation().theta);
  }
  throw std::logic_error("invert_key: unknown family");
}

namespace detail {
// Plane rotations commute as matrices; this spot-checks the numeric claim
// on random unit vectors without pulling in the qubit machinery.
inline bool rotation_commutes_sampled(double theta1, double theta2, int samples, Rng& rng) {
  const auto turn = [](double a0, double a1, double t) {
    return std::pair<double, double>{a0 * std::cos(t) - a1 * std::sin(t),
                                     a0 * std::sin(t) + a1 * std::cos(t)};
  };
  for (int i = 0; i < samples; ++i) {
    const double phi = rng.angle();
    auto ab = turn(std::cos(phi), std::sin(phi), theta1);
    ab = turn(ab.first, ab.second, theta2);
    auto ba = turn(std::cos(phi), std::sin(phi), theta2);
    ba = turn(ba.first, ba.second, theta1);
    if (std::abs(ab.first - ba.first) > kStateTol || std::abs(ab.second - ba.second) > kStateTol)
      return false;
  }
  return true;
}
}  // namespace detail

// True iff the two keys' composition order is irrelevant on every checked
// input. Exhaustive whenever the domain has at most kExhaustiveDomainLimit
// elements (all n-bit payloads, or all residues in [1, p-1]); sampled
// otherwise. Rotations act on a continuum, so they are always sampled.
inline bool commutes_check(const TransformKey& k1, const TransformKey& k2, int samples, Rng& rng) {
  if (k1.family() != k2.family()) throw std::invalid_argument("commutes_check: family mismatch");
  if (!k1.same_params(k2)) throw std::invalid_argument("commutes_check: structural parameter mismatch");
  switch (k1.family()) {
    case Family::Pad: {
      const std::size_t n = k1.as_pad().pad.size();
      if (n <= 12 && (1ULL << n) <= kExhaustiveDomainLimit) {
        for (std::uint64_t v = 0; v < (1ULL << n); ++v) {
          const Bits x = Bits::from_value(v, n);
          if (!(apply(k1, apply(k2, x)) == apply(k2, apply(k1, x)))) return false;
        }
        return true;
      }
      for (int i = 0; i < samples; ++i) {
        const Bits x = rng.bits(n);
        if (!(apply(k1, apply(k2, x)) == apply(k2, apply(k1, x)))) return false;
      }
      return true;
    }
    case Family::ModExp: {
      const std::uint64_t p = k1.as_modexp().p;
      if (p - 1 <= kExhaustiveDomainLimit) {
        for (std::uint64_t v = 1; v <= p - 1; ++v) {
          const Bits x = modexp_payload(v, p);
          if (!(apply(k1, apply(k2, x)) == apply(k2, apply(k1, x)))) return false;
        }
        return true;
      }
      for (int i = 0; i < samples; ++i) {
        const Bits x = modexp_payload(1 + rng.below(p - 1), p);
        if (!(apply(k1, apply(k2, x)) == apply(k2, apply(k1, x)))) return false;
      }
      return true;
    }
    case Family::Rotation:
      return detail::rotation_commutes_sampled(k1.as_rotation().theta, k2.as_rotation().theta, samples, rng);
  }
  throw std::logic_error("commutes_check: unknown family");
}

}  // namespace tristage
