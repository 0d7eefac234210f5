#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace paramine {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Per-stage seeds derive from the global seed keyed by stage name, so a stage
// rerun in isolation draws the same stream as in a single-shot run.
inline std::uint64_t stage_seed(std::uint64_t global_seed, std::string_view stage) {
  return splitmix64(global_seed ^ fnv1a64(stage));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base + 0x9e3779b97f4a7c15ULL * (index + 1));
}

// mt19937_64 plus explicit rejection sampling. std::uniform_int_distribution
// is implementation-defined, which would break cross-platform reproducibility
// of seeded artifacts.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Unbiased draw from [0, bound) via masked rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    std::uint64_t r;
    do {
      r = engine_() & mask;
    } while (r >= bound);
    return r;
  }

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace paramine
