#pragma once

#include "camo/core/image.hpp"
#include "camo/sim/simulation.hpp"

namespace camo::sim {

// Draws a circled crosshair in two alternating colors.
void draw_crosshair(Image& img, Vec2 center, Rgb primary, Rgb secondary);

// Tournament image overlaid with the three ranked predator responses:
// best in black/white, second in green/black, third in red/black.
Image annotate_tournament(const TournamentRecord& record);

}  // namespace camo::sim
