#pragma once
// Fixed, platform-independent 64-bit hashing used for embeddings and
// trace fingerprints. Changing anything here invalidates stored hashes.

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace inquiry::hash {

inline constexpr std::string_view kHashName = "fnv1a64-splitmix64";

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                       std::uint64_t basis = 0xCBF29CE484222325ULL) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Seeded token hash: FNV-1a over the bytes with the seed folded into the
// offset basis, then a splitmix64 finalizer for avalanche.
inline constexpr std::uint64_t seeded(std::string_view bytes, std::uint64_t seed) {
  return splitmix64(fnv1a64(bytes, 0xCBF29CE484222325ULL ^ splitmix64(seed)));
}

inline std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string fingerprint(std::string_view bytes) { return hex(fnv1a64(bytes)); }

}  // namespace inquiry::hash
