#include "camo/sim/background.hpp"

#include <stdexcept>

#include "camo/core/image.hpp"

namespace camo::sim {

Image random_crop(const BackgroundSet& set, int edge, Rng& rng,
                  CropInfo* info) {
  if (set.images.empty())
    throw std::invalid_argument("random_crop: empty background set");
  const int idx =
      static_cast<int>(rng.uniform_int(0, static_cast<int64_t>(set.images.size()) - 1));
  const Image& img = set.images[idx];
  if (img.width() < edge || img.height() < edge)
    throw std::invalid_argument("random_crop: background smaller than crop");
  const int x0 = static_cast<int>(rng.uniform_int(0, img.width() - edge));
  const int y0 = static_cast<int>(rng.uniform_int(0, img.height() - edge));
  if (info) *info = {idx, x0, y0};
  return crop(img, x0, y0, edge, edge);
}

}  // namespace camo::sim
