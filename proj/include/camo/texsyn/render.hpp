#pragma once

#include <vector>

#include "camo/core/image.hpp"
#include "camo/core/vec2.hpp"
#include "camo/texsyn/genome.hpp"

namespace camo::texsyn {

// A rendered prey disk: a diameter x diameter raster plus its boolean
// in-disk mask. A pixel is in the mask iff its center lies within
// diameter/2 of the raster center; the edge is hard (no antialiasing).
struct DiskRaster {
  Image image;
  std::vector<uint8_t> mask;  // row-major, 1 = inside

  bool in_mask(int x, int y) const {
    return mask[static_cast<size_t>(y) * image.width() + x] != 0;
  }
};

// Renders the genome into a disk raster. The disk's bounding square maps
// to [0,1]^2 in texture space regardless of diameter.
DiskRaster render_disk(const TextureGenome& genome, int diameter_px);

// Draws a prey disk directly into an image at a (possibly fractional)
// center with the given diameter. Pixels whose centers lie within the
// radius are replaced by the genome's color at the matching texture point.
void draw_disk(Image& img, const TextureGenome& genome, Vec2 center_px,
               double diameter_px);

// Like draw_disk, but each covered pixel is blended toward the existing
// background by `toward_background` in [0,1] (0 = opaque prey).
void draw_disk_muted(Image& img, const TextureGenome& genome, Vec2 center_px,
                     double diameter_px, double toward_background);

// Dither-muted variant: each covered pixel keeps the background with
// probability `keep_background`, decided by a deterministic pixel hash.
void draw_disk_dithered(Image& img, const TextureGenome& genome,
                        Vec2 center_px, double diameter_px,
                        double keep_background);

struct PlacedPrey {
  const TextureGenome* genome;
  Vec2 center_px;
};

// Composes a tournament image: the background crop with prey disks of the
// configured diameter drawn over it. The crop must be square with the
// expected edge length.
Image compose_tournament(const Image& background_crop, int expected_edge,
                         const std::vector<PlacedPrey>& prey,
                         double diameter_px);

// Blits a pre-rendered disk raster with its top-left corner at (x0, y0);
// used by the simulation to reuse cached prey renders.
void blit_disk(Image& img, const DiskRaster& disk, int x0, int y0);

// Renders the genome over a square raster, mapping the whole image to
// [0,1]^2 in texture space. Used for genome-as-background images and the
// render CLI subcommand.
Image render_genome_image(const TextureGenome& genome, int edge_px);

}  // namespace camo::texsyn
