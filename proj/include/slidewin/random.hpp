#pragma once

#include <cstdint>
#include <random>

namespace slidewin {

using RandomEngine = std::mt19937_64;

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Child seed for an independent stream: mix64(mix64(master) ^ stream).
/// Used for per-restart and per-trial generators so results do not depend on
/// the order in which streams are consumed.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::uint64_t stream) noexcept {
  return mix64(mix64(master) ^ (stream * 0xd1b54a32d192ed03ULL + 1));
}

inline RandomEngine make_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  return RandomEngine(seq);
}

inline RandomEngine make_engine(std::uint64_t master, std::uint64_t stream) {
  return make_engine(derive_seed(master, stream));
}

}  // namespace slidewin
