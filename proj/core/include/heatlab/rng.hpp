#pragma once

#include <cstdint>
#include <string_view>

namespace heatlab::rng {

// Counter-based generator: every draw is a pure function of (seed, key),
// so generated graphs do not depend on edge iteration order.

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Uniform in [0,1) keyed by (seed, key).
inline double uniform01(std::uint64_t seed, std::uint64_t key) {
  std::uint64_t z = splitmix64(seed ^ splitmix64(key));
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed, std::uint64_t key, double lo, double hi) {
  return lo + (hi - lo) * uniform01(seed, key);
}

// Key for an undirected edge given the two vertex id strings; symmetric.
inline std::uint64_t edge_key(std::string_view u, std::string_view v) {
  std::uint64_t hu = fnv1a(u), hv = fnv1a(v);
  if (hu > hv) std::swap(hu, hv);
  return splitmix64(hu) ^ (splitmix64(hv) * 0x9e3779b97f4a7c15ULL);
}

// Small sequential counter stream for test-graph generation.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : seed_(seed) {}
  double next01() { return uniform01(seed_, counter_++); }
  double next(double lo, double hi) { return lo + (hi - lo) * next01(); }
  std::uint64_t next_u64() { return splitmix64(seed_ ^ splitmix64(counter_++)); }
  // integer in [0, n)
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace heatlab::rng
