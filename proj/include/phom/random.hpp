#pragma once

#include <cstdint>
#include <random>

namespace phom {

// Seedable generator with a platform-independent output sequence.
//
// Raw bits come from std::mt19937_64, whose sequence is fixed by the C++
// standard. The standard *distributions* are implementation-defined, so the
// conversions to uniform doubles, bounded integers and normals are done here:
//   uniform01  top 53 bits scaled by 2^-53, in [0, 1)
//   below(n)   rejection sampling, unbiased in [0, n)
//   normal     Box-Muller, both outputs used in turn
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::uint64_t below(std::uint64_t n);

  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t x);

// Seed for sub-stream `stream` of a run seeded with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix_seed(mix_seed(seed) ^ (stream + 0x9e3779b97f4a7c15ULL));
}

}  // namespace phom
