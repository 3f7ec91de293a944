#pragma once

#include "camo/core/image.hpp"
#include "camo/core/rng.hpp"
#include "camo/core/vec2.hpp"

namespace camo::predator {

// One drawn augmentation: quarter-turns, flips, and mild per-channel color
// jitter. Applied as rotate, then horizontal flip, then vertical flip,
// then jitter; the label follows the same spatial map.
struct AugmentSpec {
  int quarter_turns = 0;  // clockwise, 0..3
  bool hflip = false;
  bool vflip = false;
  float jitter[3] = {0, 0, 0};  // added per channel, result clamped to [0,1]
};

struct AugmentedImage {
  Image image;
  Vec2 label;
};

AugmentSpec draw_augment(Rng& rng, double jitter_magnitude = 0.05);

// Deterministic application; the identity spec returns the input unchanged.
AugmentedImage augment_with(const Image& image, Vec2 label,
                            const AugmentSpec& spec);

AugmentedImage augment(const Image& image, Vec2 label, Rng& rng);

}  // namespace camo::predator
