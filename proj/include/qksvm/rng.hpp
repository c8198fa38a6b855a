#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace qksvm {

// SplitMix64 finalizer. All randomness in the library flows through this mix,
// so results are identical on every platform and independent of std::rand /
// libstdc++ distribution internals.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Counter-based generator: output k of a stream is mix64(base + k*golden).
// Streams are keyed by (seed, stream id); distinct streams are independent,
// so parallel evaluation order cannot change any drawn value.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed, std::uint64_t stream = 0)
      : counter_(mix64(seed + kGolden) ^ mix64(stream * kGolden + 0x1F83D9ABFB41BD6BULL)) {}

  std::uint64_t next() {
    counter_ += kGolden;
    return mix64(counter_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound), unbiased via rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = -bound % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t counter_;
};

// FNV-1a over arbitrary bytes; used to key per-pair sampling streams off
// feature-vector content rather than evaluation order.
constexpr std::uint64_t fnv1a(const unsigned char* data, std::size_t len,
                              std::uint64_t h = 0xCBF29CE484222325ULL) {
  for (std::size_t i = 0; i < len; ++i) {
    h ^= data[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::uint64_t hash_bytes(const void* data, std::size_t len) {
  return fnv1a(static_cast<const unsigned char*>(data), len);
}

// Deterministic sub-seed derivation: (master, role tag, index) -> seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view role,
                                 std::uint64_t index = 0) {
  const std::uint64_t role_hash =
      fnv1a(reinterpret_cast<const unsigned char*>(role.data()), role.size());
  return mix64(master ^ mix64(role_hash)) + mix64(index * kGolden + 1);
}

// Fisher-Yates with our own bounded draw; std::shuffle is not
// cross-platform-deterministic.
template <typename T>
void shuffle(std::vector<T>& values, SplitMix64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace qksvm
