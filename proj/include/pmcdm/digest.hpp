#ifndef PMCDM_DIGEST_HPP
#define PMCDM_DIGEST_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace pmcdm {

/// FNV-1a over a byte string; used for content digests and stream keying.
inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string digest_hex(std::uint64_t value);
std::uint64_t digest_file(const std::string& path);  // throws Error(Io)

}  // namespace pmcdm

#endif
