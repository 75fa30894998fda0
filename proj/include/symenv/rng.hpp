#pragma once

#include <cstdint>

namespace symenv {

// Counter-based generator: every draw is a pure function of (seed, counter),
// so sample streams can be partitioned by index without shared state.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Uniform double in [0, 1) from a (seed, counter) pair.
inline double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t z = splitmix64(splitmix64(seed) ^ counter);
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

// Order-independent compensated accumulator.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace symenv
