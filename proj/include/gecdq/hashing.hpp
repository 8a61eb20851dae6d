#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gecdq {

/// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::string_view bytes);

std::string base64_encode(std::span<const unsigned char> bytes);
/// Throws ValidationError on malformed input.
std::vector<unsigned char> base64_decode(std::string_view text);

constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace gecdq
