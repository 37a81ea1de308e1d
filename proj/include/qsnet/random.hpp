#pragma once

// Seed derivation.
//
// Every stochastic step draws from its own std::mt19937_64 seeded by
// derive_seed(master, {stream, index...}). A component path is folded in with
// one SplitMix64 finalisation per component, so the stream of round 17 of
// repetition 3 is the same whether it runs first, last or on another thread.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qsnet {

using Rng = std::mt19937_64;

/// Stream tags; the numeric values are part of the reproducibility contract.
enum class Stream : std::uint64_t {
  repetition = 1,
  round = 2,
  verifier_choice = 3,
  copy_variant = 4,
  test_outcome = 5,
  report_lie = 6,
  crs = 7,
  sensing_measurement = 8,
  parity_lie = 9,
  sweep_point = 10,
};

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

inline std::uint64_t derive_seed(std::uint64_t master, Stream stream,
                                 std::initializer_list<std::uint64_t> path = {}) {
  std::uint64_t s = derive_seed(master, {static_cast<std::uint64_t>(stream)});
  return derive_seed(s, path);
}

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Uniform integer in [0, bound) by rejection; platform independent.
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound);

}  // namespace qsnet
