#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace rffmd {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives a child seed from a parent seed, a stream label and indices.
///
/// All randomness in a study flows from one base seed through this function
/// (study -> replica -> chain -> trajectory). Distinct labels or indices give
/// statistically independent Mersenne Twister streams.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label,
                          std::initializer_list<std::uint64_t> indices = {});

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

} // namespace rffmd
