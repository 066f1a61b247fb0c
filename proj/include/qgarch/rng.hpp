#ifndef QGARCH_RNG_HPP
#define QGARCH_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace qgarch {

// Every stochastic component consumes exactly one of these, seeded from
// configuration, and draws in step order. Two runs with the same seeds on
// the same build produce identical streams.
using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent stream seeds from a base
// seed without overlapping the base stream itself.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// FNV-1a over bytes; used for provenance hashes of configs and data files.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace qgarch

#endif
