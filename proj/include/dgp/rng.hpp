#pragma once

#include <cstdint>

namespace dgp {

// Counter-based, stream-splittable generator (splitmix64 finalizer over a
// keyed Weyl sequence). Stream r of seed s is statistically independent of
// stream r' != r, and generation is stateless enough that replicas can run in
// any order or thread with identical results.
class CounterRng {
 public:
  CounterRng(std::uint64_t seedBase, std::uint64_t stream)
      : key_(mix(seedBase + 0x9E3779B97F4A7C15ull) ^ mix(stream + 0xBF58476D1CE4E5B9ull)) {}

  std::uint64_t next_u64() {
    std::uint64_t z = key_ + (++counter_) * 0x9E3779B97F4A7C15ull;
    return mix(z);
  }

  // uniform in (0, 1]; never 0 so -log(u) is always finite
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace dgp
