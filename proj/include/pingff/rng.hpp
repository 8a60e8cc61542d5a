#pragma once

#include <cstdint>

namespace pingff {

// Counter-based pseudo-random generator, version "sm64-v1".
//
// Every output is a pure function of (key, stream, counter): two rounds of
// the SplitMix64 finalizer over the word  key ^ mix(stream) + counter.
// Streams derived from the same key are independent of evaluation order,
// which makes parallel runs reproducible regardless of scheduling.
struct CounterRng {
  static constexpr const char* version = "sm64-v1";

  std::uint64_t key = 0;
  std::uint64_t counter = 0;

  static constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // value at an explicit counter, without advancing state
  static constexpr std::uint64_t at(std::uint64_t key, std::uint64_t ctr) {
    return mix64(mix64(ctr + 0x632be59bd9b4e019ull) ^ key);
  }

  CounterRng() = default;
  explicit CounterRng(std::uint64_t seed) : key(mix64(seed)) {}

  // independent substream; derivation is itself counter-based
  CounterRng stream(std::uint64_t idx) const {
    CounterRng r;
    r.key = mix64(key ^ mix64(idx * 0xd1342543de82ef95ull + 1));
    return r;
  }

  std::uint64_t next_u64() { return at(key, counter++); }

  // uniform in (0,1), never exactly 0 or 1
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }
};

}  // namespace pingff
