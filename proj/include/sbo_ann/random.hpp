#pragma once

#include <cstdint>
#include <random>

namespace sbo_ann {

using Rng = std::mt19937_64;

// Independent generator streams derived from one user seed, so that the
// split and the optimizer never share draws.
enum class Stream : std::uint64_t { split = 1, optimizer = 2, synthesize = 3 };

inline Rng make_rng(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

// Uniform double in [0, 1) built from the top 53 bits. Half-open by
// construction, unlike generate_canonical which may round up to 1.
inline double unit_uniform(Rng &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_between(Rng &rng, double lo, double hi) {
  return lo + unit_uniform(rng) * (hi - lo);
}

} // namespace sbo_ann
