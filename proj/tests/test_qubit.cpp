#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "oracles.hpp"
#include "tristage/adversary.hpp"
#include "tristage/qubit.hpp"

using namespace tristage;

TEST_CASE("basis states measure back to their bit deterministically") {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    REQUIRE(measure(encode_bit(0), rng).bit == 0);
    REQUIRE(measure(encode_bit(1), rng).bit == 1);
  }
  REQUIRE_THROWS_AS(encode_bit(2), std::invalid_argument);
}

TEST_CASE("rotation by theta then minus theta restores the state") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const QubitState s = rotate(encode_bit(rng.bit()), rng.angle());
    const double theta = rng.angle();
    REQUIRE(states_close(rotate(rotate(s, theta), -theta), s));
  }
}

TEST_CASE("rotation preserves the norm") {
  Rng rng(4);
  QubitState s = encode_bit(0);
  for (int i = 0; i < 500; ++i) {
    s = rotate(s, rng.angle());
    REQUIRE(s.normalized());
  }
}

TEST_CASE("rotation key objects drive the same rotation as raw angles") {
  const QubitState s = rotate(encode_bit(1), 0.4);
  REQUIRE(states_close(rotate(s, TransformKey::rotation(1.1)), rotate(s, 1.1)));
}

TEST_CASE("measurement frequencies follow the amplitude squared") {
  Rng rng(6);
  const double theta = 0.7;
  const long n = 20000;
  long zeros = 0;
  for (long i = 0; i < n; ++i)
    if (measure(rotate(encode_bit(0), theta), rng).bit == 0) ++zeros;
  const double p0 = std::cos(theta) * std::cos(theta);
  REQUIRE(std::abs(static_cast<double>(zeros) / n - p0) < oracle::binom_band(p0, n));
}

TEST_CASE("measurement collapses to the reported basis state") {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const Measurement m = measure(rotate(encode_bit(0), rng.angle()), rng);
    REQUIRE(states_close(m.state, encode_bit(m.bit)));
  }
}

TEST_CASE("near-basis states measure deterministically despite rounding noise") {
  Rng rng(8);
  // A quarter turn maps |0> onto |1> exactly up to floating-point dust.
  for (int i = 0; i < 100; ++i) REQUIRE(measure(rotate(encode_bit(0), kTwoPi / 4.0), rng).bit == 1);
  // A chain of cancelling rotations must land back on the basis state.
  for (int i = 0; i < 100; ++i) {
    const double a = rng.angle(), b = rng.angle();
    QubitState s = rotate(rotate(rotate(rotate(encode_bit(1), a), b), -a), -b);
    REQUIRE(measure(s, rng).bit == 1);
  }
}

TEST_CASE("measure rejects unnormalized states") {
  Rng rng(9);
  REQUIRE_THROWS_AS(measure(QubitState{0.5, 0.5}, rng), std::invalid_argument);
}

TEST_CASE("planar rotations commute on sampled states") {
  Rng rng(10);
  for (int i = 0; i < 100; ++i) REQUIRE(detail::rotation_commutes_sampled(rng.angle(), rng.angle(), 20, rng));
}

TEST_CASE("intercept and resend forwards the collapsed state") {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const QubitState s = rotate(encode_bit(0), rng.angle());
    const QubitState forwarded = intercept_resend(s, rng);
    const bool basis0 = states_close(forwarded, encode_bit(0));
    const bool basis1 = states_close(forwarded, encode_bit(1));
    REQUIRE((basis0 || basis1));
  }
}
