#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace drivebound {

inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Stable hex digest used to stamp output manifests with the config that produced them.
inline std::string config_hash(std::string_view canonical_json) {
  static const char* hex = "0123456789abcdef";
  std::uint64_t h = fnv1a64(canonical_json);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace drivebound
