#pragma once

// Reference implementations the tests check the library against.
// Deliberately naive and self-contained: correctness over speed, no code
// shared with the headers under test.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace oracle {

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  unsigned __int128 acc = 1;
  unsigned __int128 b = base % mod;
  while (exp) {
    if (exp & 1) acc = acc * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(acc);
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Scan for the inverse exponent; fine for the small moduli in tests.
inline std::uint64_t inverse_exponent(std::uint64_t e, std::uint64_t m) {
  for (std::uint64_t d = 1; d < m; ++d)
    if (d * e % m == 1) return d;
  return 0;
}

inline std::vector<std::uint64_t> unit_exponents(std::uint64_t m) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t e = 1; e < m; ++e)
    if (std::gcd(e, m) == 1) out.push_back(e);
  return out;
}

inline std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = lo; p <= hi; ++p)
    if (is_prime(p)) out.push_back(p);
  return out;
}

// Probability that an intercept-resend measurement on the first leg makes
// the final bit come out wrong, as a function of the sender's fixed
// rotation angle: the attack succeeds silently only when the rotated state
// is close to a basis state.
inline double intercept_error(double theta_a) {
  const double s = std::sin(2.0 * theta_a);
  return 0.5 * s * s;
}

// Half-width of a 3-sigma binomial confidence band around proportion p
// over n samples.
inline double binom_band(double p, long n) {
  return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace oracle
