//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COLDDTI_RNG_H_
#define COLDDTI_RNG_H_

#include <cstdint>
#include <utility>
#include <vector>

namespace colddti {

// SplitMix64. Fully specified so shuffles and initializations reproduce
// across standard libraries (std distributions are implementation-defined).
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed): state_(seed) { }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, bound), rejection-sampled to avoid modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = -bound % bound;
    while (true) {
      std::uint64_t r = next();
      if (r >= limit)
        return r % bound;
    }
  }

  // Fisher-Yates, walking from the back.
  template <class T>
  void shuffle(std::vector<T> &v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(v[i - 1], v[j]);
    }
  }

private:
  std::uint64_t state_;
};

}  // namespace colddti

#endif  // COLDDTI_RNG_H_
