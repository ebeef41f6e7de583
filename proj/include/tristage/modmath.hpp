#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace tristage {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("powmod: zero modulus");
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Trial division; fine at the desk-scale moduli this library works with.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

// Inverse of a modulo m, extended Euclid. Throws when gcd(a, m) != 1.
inline std::uint64_t modinv(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw std::domain_error("modinv: not invertible");
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(t);
}

inline bool is_unit_mod(std::uint64_t e, std::uint64_t m) { return std::gcd(e, m) == 1; }

inline std::size_t bit_width_of(std::uint64_t v) {
  std::size_t w = 0;
  while (v > 0) {
    ++w;
    v >>= 1;
  }
  return w == 0 ? 1 : w;
}

}  // namespace tristage
