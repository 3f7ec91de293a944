#include "camo/texsyn/render.hpp"

#include <cmath>
#include <stdexcept>

#include "camo/texsyn/eval.hpp"
#include "camo/texsyn/noise.hpp"

namespace camo::texsyn {
namespace {

constexpr uint32_t kDitherSalt = 0x2545F491u;

inline Rgb to_rgb(Color c) {
  return {static_cast<float>(c.r), static_cast<float>(c.g),
          static_cast<float>(c.b)};
}

// shared disk scan: visits every pixel whose center is inside the disk,
// passing the texture-space point of that pixel
template <class Fn>
void scan_disk(Image& img, Vec2 center, double diameter, Fn&& fn) {
  const double radius = diameter / 2.0;
  const double r2 = radius * radius;
  const int x_lo = std::max(0, static_cast<int>(std::floor(center.x - radius)));
  const int x_hi =
      std::min(img.width() - 1, static_cast<int>(std::ceil(center.x + radius)));
  const int y_lo = std::max(0, static_cast<int>(std::floor(center.y - radius)));
  const int y_hi = std::min(img.height() - 1,
                            static_cast<int>(std::ceil(center.y + radius)));
  for (int y = y_lo; y <= y_hi; ++y)
    for (int x = x_lo; x <= x_hi; ++x) {
      const double dx = (x + 0.5) - center.x;
      const double dy = (y + 0.5) - center.y;
      if (dx * dx + dy * dy > r2) continue;
      // bounding square of the disk -> [0,1]^2
      const Vec2 tp{(dx + radius) / diameter, (dy + radius) / diameter};
      fn(x, y, tp);
    }
}

}  // namespace

DiskRaster render_disk(const TextureGenome& genome, int diameter_px) {
  if (diameter_px < 1)
    throw std::invalid_argument("render_disk: diameter must be >= 1");
  DiskRaster out;
  out.image = Image(diameter_px, diameter_px);
  out.mask.assign(static_cast<size_t>(diameter_px) * diameter_px, 0);
  const double radius = diameter_px / 2.0;
  const double r2 = radius * radius;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < diameter_px; ++y)
    for (int x = 0; x < diameter_px; ++x) {
      const double dx = (x + 0.5) - radius;
      const double dy = (y + 0.5) - radius;
      if (dx * dx + dy * dy > r2) continue;
      const Color c = sample(
          genome, {(x + 0.5) / diameter_px, (y + 0.5) / diameter_px});
      out.image.set_rgb(x, y, to_rgb(c));
      out.mask[static_cast<size_t>(y) * diameter_px + x] = 1;
    }
  return out;
}

void draw_disk(Image& img, const TextureGenome& genome, Vec2 center_px,
               double diameter_px) {
  scan_disk(img, center_px, diameter_px, [&](int x, int y, Vec2 tp) {
    img.set_rgb(x, y, to_rgb(sample(genome, tp)));
  });
}

void draw_disk_muted(Image& img, const TextureGenome& genome, Vec2 center_px,
                     double diameter_px, double toward_background) {
  scan_disk(img, center_px, diameter_px, [&](int x, int y, Vec2 tp) {
    const Rgb bg = img.rgb(x, y);
    const Color c = sample(genome, tp);
    const double t = toward_background;
    img.set_rgb(x, y, {static_cast<float>(c.r + (bg.r - c.r) * t),
                       static_cast<float>(c.g + (bg.g - c.g) * t),
                       static_cast<float>(c.b + (bg.b - c.b) * t)});
  });
}

void draw_disk_dithered(Image& img, const TextureGenome& genome,
                        Vec2 center_px, double diameter_px,
                        double keep_background) {
  scan_disk(img, center_px, diameter_px, [&](int x, int y, Vec2 tp) {
    if (cell_hash01(x, y, kDitherSalt) < keep_background) return;
    img.set_rgb(x, y, to_rgb(sample(genome, tp)));
  });
}

Image compose_tournament(const Image& background_crop, int expected_edge,
                         const std::vector<PlacedPrey>& prey,
                         double diameter_px) {
  if (background_crop.width() != expected_edge ||
      background_crop.height() != expected_edge)
    throw std::invalid_argument("compose_tournament: crop has wrong size");
  Image out = background_crop;
  for (const PlacedPrey& p : prey)
    draw_disk(out, *p.genome, p.center_px, diameter_px);
  return out;
}

Image render_genome_image(const TextureGenome& genome, int edge_px) {
  if (edge_px < 1)
    throw std::invalid_argument("render_genome_image: edge must be >= 1");
  Image out(edge_px, edge_px);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < edge_px; ++y)
    for (int x = 0; x < edge_px; ++x) {
      const Color c =
          sample(genome, {(x + 0.5) / edge_px, (y + 0.5) / edge_px});
      out.set_rgb(x, y, to_rgb(c));
    }
  return out;
}

void blit_disk(Image& img, const DiskRaster& disk, int x0, int y0) {
  const int d = disk.image.width();
  for (int y = 0; y < d; ++y) {
    const int ty = y0 + y;
    if (ty < 0 || ty >= img.height()) continue;
    for (int x = 0; x < d; ++x) {
      const int tx = x0 + x;
      if (tx < 0 || tx >= img.width()) continue;
      if (disk.in_mask(x, y)) img.set_rgb(tx, ty, disk.image.rgb(x, y));
    }
  }
}

}  // namespace camo::texsyn
