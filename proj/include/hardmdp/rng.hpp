#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>

namespace hardmdp {

// Counter-based pseudo-random generator ("sm64cb"): the splitmix64
// finalizer applied to key + counter * gamma. Output at position n is a
// pure function of (key, n), so substreams keyed by (instance, seed,
// episode) are reproducible independently of scheduling.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  // Derives a substream key by folding a path of ids into a base seed.
  static CounterRng substream(std::uint64_t seed,
                              std::initializer_list<std::uint64_t> path) {
    std::uint64_t k = mix(seed ^ 0x6a09e667f3bcc908ULL);
    for (std::uint64_t id : path) k = mix(k ^ mix(id + 0xbb67ae8584caa73bULL));
    return CounterRng(k);
  }

  std::uint64_t nextU64() { return mix(key_ + (++counter_) * kGamma); }

  // Uniform double in [0, 1), 53 random bits.
  double nextUnit() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  int nextBelow(int n) {
    if (n <= 0) throw std::invalid_argument("CounterRng::nextBelow: n must be positive");
    return static_cast<int>(nextU64() % static_cast<std::uint64_t>(n));
  }

  // Samples an index from a probability vector by CDF walk. Falls back to
  // the last positive entry if rounding pushes u past the total mass.
  int sampleCategorical(std::span<const double> probs) {
    const double u = nextUnit();
    double acc = 0.0;
    int lastPositive = -1;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
      if (probs[i] > 0.0) lastPositive = i;
      acc += probs[i];
      if (u < acc) return i;
    }
    if (lastPositive < 0) throw std::invalid_argument("sampleCategorical: zero mass vector");
    return lastPositive;
  }

  std::uint64_t key() const { return key_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace hardmdp
