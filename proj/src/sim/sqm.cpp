#include "camo/sim/sqm.hpp"

#include <stdexcept>

#include "camo/texsyn/render.hpp"

namespace camo::sim {

double sqm(const texsyn::TextureGenome& prey, Localizer& standard,
           const BackgroundSet& backgrounds, const SqmGeometry& geometry,
           Rng& rng, int trials, const SqmObserver& observer) {
  if (trials < 1) throw std::invalid_argument("sqm: trials must be >= 1");
  if (geometry.tournament_edge % geometry.net_input_edge != 0)
    throw std::invalid_argument("sqm: net input edge must divide the frame");
  const PlacementGeometry placement{geometry.tournament_edge,
                                    geometry.prey_diameter};
  const double radius = geometry.prey_diameter / 2.0;
  int failures = 0;
  for (int t = 0; t < trials; ++t) {
    Image scene = random_crop(backgrounds, geometry.tournament_edge, rng);
    const Vec2 center = place_single_prey(rng, placement);
    texsyn::draw_disk(scene, prey, center, geometry.prey_diameter);
    const Image small = box_downsample(
        scene, geometry.tournament_edge / geometry.net_input_edge);
    const Vec2 norm = standard.predict_norm(to_chw(small));
    const Vec2 px = norm * static_cast<double>(geometry.tournament_edge);
    const bool failed = distance(px, center) > radius;
    if (failed) ++failures;
    if (observer) observer(t, center, px, failed);
  }
  return static_cast<double>(failures) / trials;
}

}  // namespace camo::sim
