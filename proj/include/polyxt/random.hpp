#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>

namespace polyxt {

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) by rejection on the raw 64-bit stream.
/// Unlike std::uniform_int_distribution this is identical across standard
/// library implementations, which keeps seeded outputs portable.
inline std::uint64_t uniform_below(Rng &rng, std::uint64_t bound) {
  if (bound <= 1)
    return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

inline bool coin(Rng &rng) { return (rng() >> 63) != 0; }

template <class It> void shuffle(It first, It last, Rng &rng) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    const auto j = uniform_below(rng, i);
    std::iter_swap(first + static_cast<std::ptrdiff_t>(i - 1), first + static_cast<std::ptrdiff_t>(j));
  }
}

} // namespace polyxt
