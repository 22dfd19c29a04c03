#ifndef PMCDM_RNG_HPP
#define PMCDM_RNG_HPP

#include <array>
#include <cstdint>
#include <string_view>

#include "pmcdm/digest.hpp"

namespace pmcdm {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// xoshiro256** stream. Bit-stable on every platform, unlike the standard
/// library distributions, which is what the reproducibility contract needs.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64_next(s);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), rejection sampled so it is unbiased.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = (UINT64_MAX / bound) * bound;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % bound;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

/// Stable substream key from (seed, tag, index). Results depend only on the
/// values, never on evaluation order or thread schedule.
inline std::uint64_t stream_key(std::uint64_t seed, std::string_view tag,
                                std::uint64_t index = 0) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (int i = 0; i < 8; ++i) {
    h ^= static_cast<unsigned char>(seed >> (8 * i));
    h *= 0x100000001b3ull;
  }
  h = fnv1a64(tag, h);
  for (int i = 0; i < 8; ++i) {
    h ^= static_cast<unsigned char>(index >> (8 * i));
    h *= 0x100000001b3ull;
  }
  return h;
}

inline RandomStream derive_stream(std::uint64_t seed, std::string_view tag,
                                  std::uint64_t index = 0) {
  return RandomStream(stream_key(seed, tag, index));
}

}  // namespace pmcdm

#endif
