#pragma once

#include "camo/core/rng.hpp"
#include "camo/sim/background.hpp"
#include <functional>

#include "camo/sim/localizer.hpp"
#include "camo/sim/placement.hpp"
#include "camo/texsyn/genome.hpp"

namespace camo::sim {

struct SqmGeometry {
  int tournament_edge = 512;
  int prey_diameter = 100;
  int net_input_edge = 128;
};

// per-trial detail hook for logging and tests
using SqmObserver = std::function<void(int trial, Vec2 center_px,
                                       Vec2 prediction_px, bool failed)>;

// Static quality metric: the fraction of trials in which the standard
// predator fails to find the prey. Each trial renders the prey alone at a
// valid random location on a fresh random crop; a failure is a prediction
// landing outside the disk.
double sqm(const texsyn::TextureGenome& prey, Localizer& standard,
           const BackgroundSet& backgrounds, const SqmGeometry& geometry,
           Rng& rng, int trials = 10, const SqmObserver& observer = {});

}  // namespace camo::sim
