#include "camo/predator/augment.hpp"

#include <algorithm>
#include <stdexcept>

namespace camo::predator {
namespace {

// clockwise quarter turn of a square image: out(x, y) = in(y, S-1-x)
Image rot90_cw(const Image& in) {
  const int s = in.width();
  Image out(s, s);
  for (int y = 0; y < s; ++y)
    for (int x = 0; x < s; ++x) out.set_rgb(x, y, in.rgb(y, s - 1 - x));
  return out;
}

Vec2 rot90_cw_label(Vec2 p) { return {1.0 - p.y, p.x}; }

}  // namespace

AugmentSpec draw_augment(Rng& rng, double jitter_magnitude) {
  AugmentSpec spec;
  spec.quarter_turns = static_cast<int>(rng.uniform_int(0, 3));
  spec.hflip = rng.coin();
  spec.vflip = rng.coin();
  if (rng.coin())
    for (float& j : spec.jitter)
      j = static_cast<float>(rng.uniform(-jitter_magnitude, jitter_magnitude));
  return spec;
}

AugmentedImage augment_with(const Image& image, Vec2 label,
                            const AugmentSpec& spec) {
  if (image.width() != image.height())
    throw std::invalid_argument("augment: image must be square");
  AugmentedImage out{image, label};
  for (int k = 0; k < (spec.quarter_turns & 3); ++k) {
    out.image = rot90_cw(out.image);
    out.label = rot90_cw_label(out.label);
  }
  const int s = out.image.width();
  if (spec.hflip) {
    for (int y = 0; y < s; ++y)
      for (int x = 0; x < s / 2; ++x) {
        const Rgb a = out.image.rgb(x, y);
        out.image.set_rgb(x, y, out.image.rgb(s - 1 - x, y));
        out.image.set_rgb(s - 1 - x, y, a);
      }
    out.label.x = 1.0 - out.label.x;
  }
  if (spec.vflip) {
    for (int y = 0; y < s / 2; ++y)
      for (int x = 0; x < s; ++x) {
        const Rgb a = out.image.rgb(x, y);
        out.image.set_rgb(x, y, out.image.rgb(x, s - 1 - y));
        out.image.set_rgb(x, s - 1 - y, a);
      }
    out.label.y = 1.0 - out.label.y;
  }
  if (spec.jitter[0] != 0 || spec.jitter[1] != 0 || spec.jitter[2] != 0) {
    float* px = out.image.data();
    const size_t n = out.image.value_count();
    for (size_t i = 0; i < n; ++i)
      px[i] = std::clamp(px[i] + spec.jitter[i % 3], 0.0f, 1.0f);
  }
  return out;
}

AugmentedImage augment(const Image& image, Vec2 label, Rng& rng) {
  return augment_with(image, label, draw_augment(rng));
}

}  // namespace camo::predator
