#pragma once

#include <cstdint>
#include <vector>

#include "opdyn/operator_spec.hpp"

namespace opdyn {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

// Deterministic generator: splitmix64 core with a Box-Muller normal, so
// reports do not depend on the standard library's distribution internals.
class DeterministicRng {
public:
  explicit DeterministicRng(std::uint64_t seed = kDefaultSeed)
      : state_(seed) {}

  std::uint64_t next_u64();
  double uniform01();                    // in [0, 1)
  double uniform(double lo, double hi);  // in [lo, hi)
  double normal();
  Complex normal_complex();

private:
  std::uint64_t state_;
};

// Coordinate vectors of the ambient space plus `extra` pseudo-random unit
// vectors, all normalized in the given base norm. For shift models
// (infinite dimension) coordinate vectors run up to index 32 and random
// supports live in [0, 32] (or [-16, 16] for bilateral shifts).
std::vector<SparseVector> default_unit_samples(const OperatorSpec& spec,
                                               int extra,
                                               std::uint64_t seed);

// A single pseudo-random unit vector on the coordinate window [lo, hi].
SparseVector random_unit_vector(DeterministicRng& rng, std::int64_t lo,
                                std::int64_t hi, ScalarField field,
                                BaseNorm base);

}  // namespace opdyn
