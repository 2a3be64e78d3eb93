#pragma once

#include <cstdint>
#include <random>

namespace dtnn {

/// Portable seeded generator.
///
/// Engine: std::mt19937_64, whose output sequence is fixed by the C++ standard.
/// Seeding: engine seed = splitmix64(seed ^ splitmix64(stream)), so distinct
/// streams from one user seed are decorrelated.
/// uniform(): top 53 bits of one engine draw, scaled to [0, 1).
/// normal(): Box-Muller on two uniform() draws, second variate cached.
/// below(n): rejection sampling on engine draws, unbiased in [0, n).
///
/// std::normal_distribution is avoided because its algorithm differs
/// between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  double uniform();
  double normal();
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace dtnn
