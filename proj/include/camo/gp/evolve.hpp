#pragma once

#include "camo/core/rng.hpp"
#include "camo/texsyn/genome.hpp"

namespace camo::gp {

using texsyn::TextureGenome;
using texsyn::ValueType;

// Grows a random type-correct tree with node count <= max_size and the
// given root type. max_size must be at least the smallest complete tree
// for that type (throws otherwise). Deterministic given the rng state.
TextureGenome random_tree(ValueType return_type, int max_size, Rng& rng);

struct CrossoverResult {
  TextureGenome offspring;
  // true when no subtree pair satisfying the size bounds was found within
  // the attempt budget and the size-closest candidate was accepted
  bool size_fallback = false;
};

// Subtree crossover: a uniformly chosen subtree of a copy of `recipient`
// is replaced by a uniformly chosen type-compatible subtree of `donor`.
// Pairs are redrawn until the offspring size lands in [min_size, max_size],
// up to `attempts` draws; then the closest candidate is accepted and
// flagged. Parents are not modified.
CrossoverResult crossover(const TextureGenome& recipient,
                          const TextureGenome& donor, int min_size,
                          int max_size, Rng& rng, int attempts = 50);

// Jiggles every numeric leaf by a uniform offset of magnitude at most
// jiggle_fraction * the leaf type's range, then clips back into range.
// Tree shape and operator identities are unchanged.
TextureGenome mutate_leaves(const TextureGenome& genome, double jiggle_fraction,
                            Rng& rng);

// Clip helper shared by mutation; exposed for tests of the boundary rule.
double clamp_to_range(double v, ValueType leaf_type);

}  // namespace camo::gp
