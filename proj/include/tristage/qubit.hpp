#pragma once

#include <cmath>
#include <stdexcept>

#include "tristage/constants.hpp"
#include "tristage/rng.hpp"
#include "tristage/transforms.hpp"

namespace tristage {

// Real two-amplitude qubit state. The rotation-based protocol never leaves
// the real plane, so complex phases are not modeled.
struct QubitState {
  double a0 = 1.0;
  double a1 = 0.0;

  double norm2() const { return a0 * a0 + a1 * a1; }
  bool normalized(double tol = kStateTol) const { return std::abs(norm2() - 1.0) < tol; }
};

inline bool states_close(const QubitState& a, const QubitState& b, double tol = kStateTol) {
  return std::abs(a.a0 - b.a0) < tol && std::abs(a.a1 - b.a1) < tol;
}

inline QubitState encode_bit(int b) {
  if (b != 0 && b != 1) throw std::invalid_argument("encode_bit: bit must be 0 or 1");
  return b == 0 ? QubitState{1.0, 0.0} : QubitState{0.0, 1.0};
}

inline QubitState rotate(const QubitState& s, double theta) {
  const double c = std::cos(theta);
  const double n = std::sin(theta);
  return QubitState{s.a0 * c - s.a1 * n, s.a0 * n + s.a1 * c};
}

inline QubitState rotate(const QubitState& s, const TransformKey& key) {
  return rotate(s, key.as_rotation().theta);
}

struct Measurement {
  int bit = 0;
  QubitState state;  // collapsed basis state
};

// Computational-basis measurement with explicit collapse, so an
// intercept-resend attack is a single measure call. Probabilities within
// kProbSnap of 0 or 1 resolve deterministically; this keeps basis states
// exact through the floating-point noise of prior rotations.
inline Measurement measure(const QubitState& s, Rng& rng) {
  if (!s.normalized()) throw std::invalid_argument("measure: state is not normalized");
  const double p0 = s.a0 * s.a0;
  int bit;
  if (p0 >= 1.0 - kProbSnap) {
    bit = 0;
  } else if (p0 <= kProbSnap) {
    bit = 1;
  } else {
    bit = rng.unit() < p0 ? 0 : 1;
  }
  return Measurement{bit, encode_bit(bit)};
}

}  // namespace tristage
