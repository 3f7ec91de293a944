#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace camo {

// Deterministic random source with named substreams. One master seed is
// split into independent streams (placement, prey evolution, predator
// evolution, cropping, dataset, ...) so a change in how one subsystem
// consumes randomness does not perturb the others. All distributions are
// implemented here rather than with <random> distribution objects, whose
// output is implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  // Independent stream derived from this stream's seed and a label.
  // Deriving the same label twice yields the same stream.
  Rng derive(std::string_view label) const;

  uint64_t next_u64() { return engine_(); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [lo, hi], inclusive, unbiased
  int64_t uniform_int(int64_t lo, int64_t hi);

  bool coin() { return (next_u64() >> 63) != 0; }

  // standard normal via Box-Muller (no cached spare, so the draw count
  // per call is fixed)
  double normal();

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace camo
