#ifndef TUMORSEG_RNG_HPP
#define TUMORSEG_RNG_HPP

#include <cstdint>
#include <random>

namespace tumorseg {

// 64-bit avalanche mix (splitmix64 finalizer). Bit-exact contract:
//   x += 0x9E3779B97F4A7C15
//   x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9
//   x = (x ^ (x >> 27)) * 0x94D049BB133111EB
//   x =  x ^ (x >> 31)
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Stateless per-sample seed: two chained avalanche rounds over the
// (master_seed, epoch, sample_index) tuple. Identical inputs always give
// identical seeds, so augmentation streams are position-derived and never
// depend on processing order.
constexpr std::uint64_t derive_sample_seed(std::uint64_t master_seed, std::uint64_t epoch,
                                           std::uint64_t sample_index) {
  return mix64(mix64(master_seed ^ 0xD1B54A32D192ED03ull * epoch) ^
               0xEB44ACCAB455D165ull * sample_index);
}

// Deterministic draws on top of mt19937_64. The engine's output sequence is
// fixed by the standard; the float mappings below are spelled out manually
// because std::uniform_*_distribution is implementation-defined.
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1): top 53 bits scaled by 2^-53.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [-1, 1).
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n). Modulo reduction: the dataset split file is
  // the cross-run contract, not this stream.
  std::uint64_t bounded(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tumorseg

#endif
