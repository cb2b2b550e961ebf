#pragma once

#include <cstdint>

namespace hcwalk::rng {

// SplitMix64 finalizer (Steele/Lea/Flood; Vigna's public-domain constants).
inline uint64_t mix64(uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based keyed hash: value depends only on (key, counter), never on
// query order. This is what makes environments and per-task substreams
// shareable across parallel workers.
inline uint64_t keyed(uint64_t key, uint64_t counter) {
  uint64_t h = mix64(key);
  h ^= counter + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  return mix64(h);
}

inline uint64_t signed_to_u64(int64_t v) {
  // zig-zag, keeps nearby negative/positive levels on distinct counters
  return (static_cast<uint64_t>(v) << 1) ^ static_cast<uint64_t>(v >> 63);
}

inline double to_unit_double(uint64_t bits) {
  // 53 high bits -> [0,1)
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Deterministic stream: key fixed, counter advances per draw.
class Stream {
 public:
  explicit Stream(uint64_t key) : key_(key) {}

  static Stream derive(uint64_t master_seed, uint64_t task_index) {
    return Stream(keyed(master_seed, task_index));
  }

  uint64_t next_u64() { return keyed(key_, counter_++); }
  double next_double() { return to_unit_double(next_u64()); }
  bool next_coin() { return (next_u64() & 1ULL) != 0; }
  int next_pm1() { return next_coin() ? +1 : -1; }

  uint64_t key() const { return key_; }
  uint64_t counter() const { return counter_; }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace hcwalk::rng
