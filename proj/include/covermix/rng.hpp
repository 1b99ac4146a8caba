#pragma once
#include <cstdint>

namespace covermix {

// Counter-based generator: value = mix(seed, stream, counter).  Stateless, so
// parallel workers drawing sample i produce identical streams no matter how
// the index range is partitioned.
struct CounterRng {
  std::uint64_t seed;

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const {
    std::uint64_t h = mix(seed ^ 0x6a09e667f3bcc909ULL);
    h = mix(h ^ mix(stream));
    h = mix(h ^ mix(counter));
    return h;
  }

  // uniform in [0,1), 53-bit mantissa
  double uniform(std::uint64_t stream, std::uint64_t counter) const {
    return double(bits(stream, counter) >> 11) * 0x1.0p-53;
  }

  double uniform(std::uint64_t stream, std::uint64_t counter, double lo, double hi) const {
    return lo + (hi - lo) * uniform(stream, counter);
  }
};

}  // namespace covermix
