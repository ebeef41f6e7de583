#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "tristage/bits.hpp"

namespace tristage {

// k equal-length data shares plus one parity share (the xor of all data
// shares). Corrects one erased share, detects one corrupted bit. A missing
// share is a nullopt.
struct ShareSet {
  std::vector<std::optional<Bits>> data_shares;
  std::optional<Bits> parity;

  int k() const { return static_cast<int>(data_shares.size()); }

  int missing_count() const {
    int n = 0;
    for (const auto& s : data_shares)
      if (!s) ++n;
    return n;
  }
};

// Contiguous chunking of the payload into k shares, parity appended.
inline ShareSet split(const Bits& payload, int k) {
  if (k < 2) throw std::invalid_argument("split: k must be >= 2");
  if (payload.empty() || payload.size() % k != 0)
    throw std::invalid_argument("split: payload length must be a positive multiple of k");
  const std::size_t share_len = payload.size() / k;
  ShareSet s;
  Bits parity(share_len);
  for (int i = 0; i < k; ++i) {
    Bits share = payload.slice(i * share_len, share_len);
    parity = parity ^ share;
    s.data_shares.push_back(std::move(share));
  }
  s.parity = parity;
  return s;
}

// Concatenation of the data shares, solving at most one missing share from
// the parity.
inline Bits reconstruct(const ShareSet& s) {
  const int missing = s.missing_count();
  if (missing > 1) throw std::invalid_argument("reconstruct: more than one missing data share is unrecoverable");
  if (missing == 1 && !s.parity) throw std::invalid_argument("reconstruct: parity required to solve a missing share");

  std::optional<Bits> solved;
  if (missing == 1) {
    Bits acc = *s.parity;
    for (const auto& share : s.data_shares)
      if (share) acc = acc ^ *share;
    solved = acc;
  }
  Bits out;
  for (const auto& share : s.data_shares) out.append(share ? *share : *solved);
  return out;
}

// True iff parity equals the xor of all data shares. Requires everything
// present. Catches all odd-weight corruption per column; even flips in one
// column cancel out.
inline bool verify_parity(const ShareSet& s) {
  if (!s.parity) throw std::invalid_argument("verify_parity: parity share missing");
  if (s.missing_count() > 0) throw std::invalid_argument("verify_parity: all data shares must be present");
  Bits acc(s.parity->size());
  for (const auto& share : s.data_shares) acc = acc ^ *share;
  return acc == *s.parity;
}

}  // namespace tristage
