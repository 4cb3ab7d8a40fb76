#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qinit {

// splitmix64 finalizer; used to derive independent seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives a stream seed from (master, index, tag). Distinct tags give
// disjoint streams, e.g. dataset mining vs. test-graph generation.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                 std::string_view tag) {
  std::uint64_t h = master;
  for (char c : tag) {
    h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
  }
  return splitmix64(h ^ index);
}

using Rng = std::mt19937_64;

}  // namespace qinit
