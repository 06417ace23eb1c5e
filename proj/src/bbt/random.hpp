#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace bbt {

using Rng = std::mt19937_64;

/// Mixes a master seed with stream indices (splitmix64 finalizer) so that
/// independent tasks get decorrelated, reproducible streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> stream) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(master);
  for (std::uint64_t s : stream) h = mix(h ^ mix(s));
  return h;
}

}  // namespace bbt
