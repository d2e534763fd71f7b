#ifndef PLAYLEARN_RNG_HPP
#define PLAYLEARN_RNG_HPP

#include <cstdint>
#include <random>

namespace playlearn {

/// Random stream with platform-independent derived draws.
///
/// std::uniform_*_distribution are implementation-defined, so identical seeds
/// would not give identical walks across standard libraries. The engine is
/// the standard mt19937_64; only the mapping to [0,1) and [0,n) is ours.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), unbiased by rejection. n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finaliser; used to derive independent seeds from (master, index).
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace playlearn

#endif  // PLAYLEARN_RNG_HPP
