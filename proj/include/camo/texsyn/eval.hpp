#pragma once

#include "camo/core/vec2.hpp"
#include "camo/texsyn/genome.hpp"
#include "camo/texsyn/types.hpp"

namespace camo::texsyn {

// Samples the texture program at a point. Pure and deterministic: the same
// (genome, point) always yields the same color, from any thread. The unit
// square [0,1]^2 covers the prey disk's bounding box. Output channels are
// clamped into [0,1]; intermediate operator math is unclamped.
Color sample(const TextureGenome& genome, Vec2 p);

}  // namespace camo::texsyn
