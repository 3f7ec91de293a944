#pragma once

#include <cstdint>

#include "camo/core/vec2.hpp"

namespace camo::texsyn {

// Classic 2D lattice gradient noise with a fixed permutation table, so a
// genome renders identically in every run and process. `salt` selects an
// independent channel (used for color noise and warp displacement).
// Output is in [-1, 1]-ish lattice units; gradient_noise_01 remaps to [0,1].
double gradient_noise(Vec2 p, uint32_t salt = 0);
double gradient_noise_01(Vec2 p, uint32_t salt = 0);

// Stateless integer hash -> [0,1), used for deterministic procedural
// placement (spot fields). Pure function of its arguments.
double cell_hash01(int64_t ix, int64_t iy, uint32_t salt);

}  // namespace camo::texsyn
