#pragma once

#include <cstdint>
#include <stdexcept>

// Counter-based splittable randomness: a stream is keyed by a chain of
// derive_stream calls plus a per-item index, so item i's draws never depend
// on how many draws item i-1 consumed. The construction is plain 64-bit
// integer arithmetic and reproduces bit-identically across platforms.

namespace ilwe {

constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Injective in `field` for a fixed key; chain to build stream hierarchies.
constexpr std::uint64_t derive_stream(std::uint64_t key, std::uint64_t field) {
  return mix64(mix64(key + kGolden64) + field * 0xD1B54A32D192ED03ull);
}

class StreamRng {
 public:
  StreamRng(std::uint64_t key, std::uint64_t index) : state_(derive_stream(key, index)) {}

  std::uint64_t next_u64() {
    state_ += kGolden64;
    return mix64(state_);
  }

  // Uniform on [0, bound), unbiased via rejection of the top remainder.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("StreamRng::below: bound must be positive");
    const std::uint64_t rem = (-bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= rem) return r % bound;
    }
  }

  // Uniform on [lo, hi], both inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("StreamRng::uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (span == 0) {  // full 64-bit range
      return static_cast<std::int64_t>(next_u64());
    }
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + below(span));
  }

  bool coin() { return (next_u64() & 1) != 0; }

 private:
  std::uint64_t state_;
};

}  // namespace ilwe
