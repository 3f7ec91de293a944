#pragma once

#include <string>
#include <vector>

#include "camo/core/image.hpp"
#include "camo/core/rng.hpp"
#include "camo/core/vec2.hpp"
#include "camo/sim/background.hpp"
#include "camo/texsyn/genome.hpp"

namespace camo::predator {

// Geometry and recipe for "find conspicuous disk" training examples.
// Images are generated at the net input size; the disk diameter keeps the
// tournament-frame proportion (100 px in a 512 frame by default).
struct FcdParams {
  int image_edge = 128;
  int tournament_edge = 512;
  int prey_diameter = 100;
  int genome_max_size = 100;  // size budget for random prey/background trees

  double disk_diameter() const {
    return static_cast<double>(prey_diameter) * image_edge / tournament_edge;
  }
};

enum class MuteMode { Blend, Dither };

struct MutedDisk {
  MuteMode mode = MuteMode::Blend;
  double amount = 0.0;  // blend factor toward background / keep fraction
};

// Full scene description, enough to re-render the example (used by the
// dataset manifest and the label-correctness tests).
struct FcdScene {
  bool photo_background = false;
  sim::CropInfo crop;                       // valid when photo_background
  texsyn::TextureGenome background_genome;  // valid when !photo_background
  std::vector<texsyn::TextureGenome> genomes;
  std::vector<Vec2> centers_px;  // in image_edge frame
  std::vector<MutedDisk> muting;  // parallel to disks; amount 0 = unaltered
  int label_disk = 0;
};

struct FcdExample {
  Image image;
  Vec2 label;  // normalized center of the unaltered disk
  int style = 1;
  FcdScene scene;
};

// One example in one of three styles chosen with equal probability:
//   1: a single prey disk, labeled at its center
//   2: three different prey, two muted into the background
//   3: three copies of one prey, two muted
// The background is a photo crop or a rendered random genome by fair coin
// (always a genome when `photos` is null or empty). forced_style in {1,2,3}
// pins the style for tests; 0 draws it.
FcdExample fcd_generate(Rng& rng, const sim::BackgroundSet* photos,
                        const FcdParams& params, int forced_style = 0);

// n independent examples
std::vector<FcdExample> fcd_dataset(int n, Rng& rng,
                                    const sim::BackgroundSet* photos,
                                    const FcdParams& params);

// exposed for the style-frequency test
int draw_style(Rng& rng);

// Writes one PNG per example plus a manifest of
// "<filename>\t<label-x>\t<label-y>\t<style>" lines. Returns the manifest
// path; written files are appended to `written` when non-null.
std::string save_fcd_dataset(const std::vector<FcdExample>& dataset,
                             const std::string& directory,
                             std::vector<std::string>* written = nullptr);

// Re-renders an example from its scene description (oracle path for the
// label-correctness invariant).
Image render_fcd_scene(const FcdScene& scene, const sim::BackgroundSet* photos,
                       const FcdParams& params);

}  // namespace camo::predator
