#pragma once

#include <cstdint>
#include <random>

#include "tristage/bits.hpp"
#include "tristage/constants.hpp"

namespace tristage {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

// Deterministic random stream. All draws go through hand-rolled helpers
// rather than std distributions, so a (seed, trial) pair reproduces the
// same sequence on every platform. No ambient entropy anywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(detail::splitmix64(seed)) {}

  // Independent per-trial stream derived from (seed, trial index).
  static Rng for_trial(std::uint64_t seed, std::uint64_t trial) {
    return Rng(detail::splitmix64(seed ^ detail::splitmix64(trial + 1)));
  }

  std::uint64_t next() { return gen_(); }

  // Uniform in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % n;
  }

  int bit() { return static_cast<int>(gen_() >> 63); }

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform angle in [0, 2*pi).
  double angle() { return unit() * kTwoPi; }

  Bits bits(std::size_t n) {
    Bits out(n);
    for (std::size_t i = 0; i < n; ++i) out.set(i, bit());
    return out;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace tristage
