#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tristage {

// Ordered bit sequence, the classical payload type. Index 0 is the most
// significant bit when the sequence is read as an integer.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t n) : bits_(n, 0) {}

  static Bits parse(std::string_view s) {
    Bits out;
    out.bits_.reserve(s.size());
    for (char c : s) {
      if (c != '0' && c != '1') throw std::invalid_argument("Bits::parse: expected only 0/1, got '" + std::string(1, c) + "'");
      out.bits_.push_back(c == '1');
    }
    return out;
  }

  static Bits from_value(std::uint64_t v, std::size_t width) {
    if (width == 0 || width > 64) throw std::invalid_argument("Bits::from_value: width must be in [1,64]");
    if (width < 64 && (v >> width) != 0) throw std::invalid_argument("Bits::from_value: value does not fit in width");
    Bits out(width);
    for (std::size_t i = 0; i < width; ++i) out.bits_[i] = (v >> (width - 1 - i)) & 1;
    return out;
  }

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }

  int bit(std::size_t i) const { return bits_.at(i); }
  void set(std::size_t i, int v) { bits_.at(i) = (v != 0); }
  void flip(std::size_t i) { bits_.at(i) ^= 1; }

  std::uint64_t value() const {
    if (size() > 64) throw std::domain_error("Bits::value: wider than 64 bits");
    std::uint64_t v = 0;
    for (std::uint8_t b : bits_) v = (v << 1) | b;
    return v;
  }

  std::string str() const {
    std::string s(size(), '0');
    for (std::size_t i = 0; i < size(); ++i) s[i] = bits_[i] ? '1' : '0';
    return s;
  }

  Bits operator^(const Bits& other) const {
    if (size() != other.size()) throw std::invalid_argument("Bits: xor length mismatch (" + std::to_string(size()) + " vs " + std::to_string(other.size()) + ")");
    Bits out(size());
    for (std::size_t i = 0; i < size(); ++i) out.bits_[i] = bits_[i] ^ other.bits_[i];
    return out;
  }

  Bits slice(std::size_t pos, std::size_t len) const {
    if (pos + len > size()) throw std::out_of_range("Bits::slice: range past end");
    Bits out(len);
    for (std::size_t i = 0; i < len; ++i) out.bits_[i] = bits_[pos + i];
    return out;
  }

  Bits& append(const Bits& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
    return *this;
  }

  friend bool operator==(const Bits&, const Bits&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

}  // namespace tristage
