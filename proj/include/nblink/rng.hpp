#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace nblink {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed of the named substream derived from one run seed. Substreams are
/// "channel", "traffic", "link", "mab" and "gan"; callers may append an index
/// (episode, sweep point) to keep parallel runs independent.
inline constexpr std::uint64_t substream_seed(std::uint64_t seed, std::string_view name,
                                              std::uint64_t index = 0) noexcept {
  return splitmix64(splitmix64(seed ^ fnv1a(name)) + index);
}

inline Rng make_rng(std::uint64_t seed, std::string_view name, std::uint64_t index = 0) {
  return Rng{substream_seed(seed, name, index)};
}

/// Uniform in the open interval (0, 1) from 53 high bits of a 64-bit word.
inline constexpr double to_unit_open(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

inline double uniform01(Rng& rng) { return to_unit_open(rng()); }

}  // namespace nblink
