#pragma once

namespace tristage {

// Centralized numeric tolerances.
inline constexpr double kStateTol = 1e-9;    // qubit normalization / state comparisons
inline constexpr double kAlgebraTol = 1e-12; // algebraic identities (angles, amplitudes)

// Measurement probabilities closer than this to 0 or 1 collapse
// deterministically. A few chained rotations leave basis states with
// amplitude noise around 1e-15, well inside this margin, so exact
// round-trips measure exactly.
inline constexpr double kProbSnap = 1e-12;

// Commutation checks enumerate the whole domain up to this size, then sample.
inline constexpr unsigned long long kExhaustiveDomainLimit = 4096;

// modexp_bruteforce refuses moduli above desk scale.
inline constexpr unsigned long long kBruteforceMaxPrime = 10000;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace tristage
