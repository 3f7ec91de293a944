#pragma once

#include <string>
#include <vector>

#include "camo/core/image.hpp"
#include "camo/core/rng.hpp"

namespace camo::sim {

// A background set: the environment for a run. Images are stored already
// scaled; every one admits at least one crop of the tournament edge.
struct BackgroundSet {
  std::string directory;
  double scale = 1.0;
  std::vector<Image> images;          // scaled
  std::vector<std::string> names;     // file names, parallel to images
};

struct CropInfo {
  int image_index = 0;
  int x0 = 0;
  int y0 = 0;
};

// Uniform random image choice, then a uniform random axis-aligned window.
// Throws if any image is smaller than the window (validated at load, but
// synthetic sets built in tests go through the same check).
Image random_crop(const BackgroundSet& set, int edge, Rng& rng,
                  CropInfo* info = nullptr);

}  // namespace camo::sim
