#pragma once

#include <cstdint>
#include <string_view>

namespace frontier_lab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Child seed for (root, index, purpose). Every random stream in the lab is
/// derived this way so results do not depend on scheduling order.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index, std::string_view purpose) {
  return splitmix64(splitmix64(root ^ fnv1a(purpose)) + splitmix64(index));
}

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit engine draw.
template <typename Rng>
double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace frontier_lab
