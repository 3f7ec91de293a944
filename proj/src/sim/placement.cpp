#include "camo/sim/placement.hpp"

#include <stdexcept>

namespace camo::sim {
namespace {

constexpr int kMaxRejections = 10000;

Vec2 draw_center(Rng& rng, const PlacementGeometry& g) {
  // integer coordinates in [radius, frame - radius]
  const int lo = g.prey_diameter / 2;
  const int hi = g.frame_edge - g.prey_diameter / 2;
  return {static_cast<double>(rng.uniform_int(lo, hi)),
          static_cast<double>(rng.uniform_int(lo, hi))};
}

bool in_bounds(Vec2 c, const PlacementGeometry& g) {
  const double r = g.radius();
  return c.x >= r && c.y >= r && c.x <= g.frame_edge - r &&
         c.y <= g.frame_edge - r;
}

bool avoids_center(Vec2 c, const PlacementGeometry& g) {
  return distance(c, g.frame_center()) >= g.prey_diameter;
}

}  // namespace

bool placement_valid(const std::array<Vec2, 3>& centers,
                     const PlacementGeometry& g) {
  for (const Vec2& c : centers)
    if (!in_bounds(c, g) || !avoids_center(c, g)) return false;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (distance(centers[i], centers[j]) < g.prey_diameter) return false;
  return true;
}

std::array<Vec2, 3> place_prey(Rng& rng, const PlacementGeometry& g) {
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    const std::array<Vec2, 3> centers = {draw_center(rng, g),
                                         draw_center(rng, g),
                                         draw_center(rng, g)};
    if (placement_valid(centers, g)) return centers;
  }
  throw std::runtime_error("place_prey: geometry admits no valid placement");
}

Vec2 place_single_prey(Rng& rng, const PlacementGeometry& g) {
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    const Vec2 c = draw_center(rng, g);
    if (avoids_center(c, g)) return c;
  }
  throw std::runtime_error("place_single_prey: no valid position");
}

}  // namespace camo::sim
