#pragma once

#include <array>

#include "camo/core/rng.hpp"
#include "camo/core/vec2.hpp"

namespace camo::sim {

// Prey placement rules in the tournament frame. Centers land on integer
// pixel coordinates so cached 100 px disk rasters blit onto the grid.
struct PlacementGeometry {
  int frame_edge = 512;
  int prey_diameter = 100;

  double radius() const { return prey_diameter / 2.0; }
  Vec2 frame_center() const { return {frame_edge / 2.0, frame_edge / 2.0}; }
};

// True when the centers satisfy all of:
//  (a) pairwise distance >= prey diameter (disks do not overlap)
//  (b) distance to the frame center >= prey diameter (center avoidance)
//  (c) disks fully inside the frame
bool placement_valid(const std::array<Vec2, 3>& centers,
                     const PlacementGeometry& g);

// Rejection sampling of whole triples, uniform over the valid set.
// Throws after 10^4 rejected triples (cannot happen at default geometry).
std::array<Vec2, 3> place_prey(Rng& rng, const PlacementGeometry& g = {});

// Single-prey variant under rules (b) and (c); used by the static quality
// metric trials.
Vec2 place_single_prey(Rng& rng, const PlacementGeometry& g = {});

}  // namespace camo::sim
