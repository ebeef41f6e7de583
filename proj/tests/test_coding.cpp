#include <catch2/catch_amalgamated.hpp>

#include "tristage/coding.hpp"
#include "tristage/rng.hpp"

using namespace tristage;

TEST_CASE("split produces k equal shares whose xor is the parity") {
  const Bits payload = Bits::parse("110010101111");
  const ShareSet s = split(payload, 3);
  REQUIRE(s.k() == 3);
  Bits acc(4);
  for (const auto& share : s.data_shares) {
    REQUIRE(share->size() == 4);
    acc = acc ^ *share;
  }
  REQUIRE(acc == *s.parity);
  REQUIRE(verify_parity(s));
}

TEST_CASE("reconstruct concatenates the shares back into the payload") {
  Rng rng(21);
  for (int k : {2, 3, 4, 6}) {
    const Bits payload = rng.bits(12);
    REQUIRE(reconstruct(split(payload, k)) == payload);
  }
}

TEST_CASE("any single erased share is solved from the parity") {
  Rng rng(22);
  for (int k : {2, 3, 5}) {
    const Bits payload = rng.bits(5 * k);
    const ShareSet base = split(payload, k);
    for (int erased = 0; erased < k; ++erased) {
      ShareSet s = base;
      s.data_shares[erased].reset();
      REQUIRE(s.missing_count() == 1);
      REQUIRE(reconstruct(s) == payload);
    }
  }
}

TEST_CASE("reconstruction fails beyond one erasure or without parity") {
  const ShareSet base = split(Bits::parse("11001010"), 4);
  ShareSet two = base;
  two.data_shares[0].reset();
  two.data_shares[2].reset();
  REQUIRE_THROWS_AS(reconstruct(two), std::invalid_argument);
  ShareSet noparity = base;
  noparity.data_shares[1].reset();
  noparity.parity.reset();
  REQUIRE_THROWS_AS(reconstruct(noparity), std::invalid_argument);
}

TEST_CASE("any single flipped bit breaks parity verification") {
  Rng rng(23);
  const Bits payload = rng.bits(12);
  for (int k : {2, 3, 4}) {
    const ShareSet base = split(payload, k);
    const std::size_t share_len = payload.size() / k;
    for (int si = 0; si <= k; ++si) {  // k = parity share
      for (std::size_t b = 0; b < share_len; ++b) {
        ShareSet s = base;
        if (si < k)
          s.data_shares[si]->flip(b);
        else
          s.parity->flip(b);
        REQUIRE_FALSE(verify_parity(s));
      }
    }
  }
}

TEST_CASE("an even number of flips in one column cancels out") {
  // The parity share catches odd-weight corruption per column; this is the
  // documented boundary of the detector.
  ShareSet s = split(Bits::parse("10110100"), 2);
  s.data_shares[0]->flip(1);
  s.data_shares[1]->flip(1);
  REQUIRE(verify_parity(s));
}

TEST_CASE("verify_parity insists on a complete share set") {
  ShareSet s = split(Bits::parse("1010"), 2);
  ShareSet gap = s;
  gap.data_shares[0].reset();
  REQUIRE_THROWS_AS(verify_parity(gap), std::invalid_argument);
  ShareSet nop = s;
  nop.parity.reset();
  REQUIRE_THROWS_AS(verify_parity(nop), std::invalid_argument);
}

TEST_CASE("split rejects degenerate share counts and lengths") {
  REQUIRE_THROWS_AS(split(Bits::parse("1010"), 1), std::invalid_argument);
  REQUIRE_THROWS_AS(split(Bits::parse("1010"), 3), std::invalid_argument);
  REQUIRE_THROWS_AS(split(Bits{}, 2), std::invalid_argument);
}
