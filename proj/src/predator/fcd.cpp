#include "camo/predator/fcd.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "camo/core/image_io.hpp"
#include "camo/gp/evolve.hpp"
#include "camo/texsyn/render.hpp"

namespace camo::predator {
namespace {

constexpr int kPlacementAttempts = 10000;

bool has_photos(const sim::BackgroundSet* photos) {
  return photos != nullptr && !photos->images.empty();
}

Image make_photo_background(const sim::BackgroundSet& photos,
                            const FcdParams& params, Rng& rng,
                            sim::CropInfo* info) {
  if (params.tournament_edge % params.image_edge != 0)
    throw std::invalid_argument("FcdParams: image edge must divide 512");
  const Image crop = sim::random_crop(photos, params.tournament_edge, rng, info);
  return box_downsample(crop, params.tournament_edge / params.image_edge);
}

Image background_from_crop(const sim::BackgroundSet& photos,
                           const FcdParams& params, const sim::CropInfo& info) {
  const Image window =
      crop(photos.images[info.image_index], info.x0, info.y0,
           params.tournament_edge, params.tournament_edge);
  return box_downsample(window, params.tournament_edge / params.image_edge);
}

std::vector<Vec2> place_fcd_disks(int count, const FcdParams& params,
                                  Rng& rng) {
  const double d = params.disk_diameter();
  const double r = d / 2.0;
  const double lo = r;
  const double hi = params.image_edge - r;
  if (hi <= lo)
    throw std::invalid_argument("FcdParams: disk larger than image");
  for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
    std::vector<Vec2> centers(count);
    for (auto& c : centers) c = {rng.uniform(lo, hi), rng.uniform(lo, hi)};
    bool ok = true;
    for (int i = 0; i < count && ok; ++i)
      for (int j = i + 1; j < count; ++j)
        if (distance(centers[i], centers[j]) < d) {
          ok = false;
          break;
        }
    if (ok) return centers;
  }
  throw std::runtime_error("fcd_generate: could not place disks");
}

void draw_scene_disks(Image& img, const FcdScene& scene,
                      const FcdParams& params) {
  const double d = params.disk_diameter();
  for (size_t i = 0; i < scene.genomes.size(); ++i) {
    const MutedDisk& mute = scene.muting[i];
    if (mute.amount == 0.0) {
      texsyn::draw_disk(img, scene.genomes[i], scene.centers_px[i], d);
    } else if (mute.mode == MuteMode::Blend) {
      texsyn::draw_disk_muted(img, scene.genomes[i], scene.centers_px[i], d,
                              mute.amount);
    } else {
      texsyn::draw_disk_dithered(img, scene.genomes[i], scene.centers_px[i], d,
                                 mute.amount);
    }
  }
}

}  // namespace

int draw_style(Rng& rng) { return static_cast<int>(rng.uniform_int(1, 3)); }

FcdExample fcd_generate(Rng& rng, const sim::BackgroundSet* photos,
                        const FcdParams& params, int forced_style) {
  FcdExample ex;
  ex.style = forced_style != 0 ? forced_style : draw_style(rng);
  if (ex.style < 1 || ex.style > 3)
    throw std::invalid_argument("fcd_generate: bad style");

  FcdScene& scene = ex.scene;
  scene.photo_background = has_photos(photos) && rng.coin();
  if (scene.photo_background) {
    ex.image = make_photo_background(*photos, params, rng, &scene.crop);
  } else {
    scene.background_genome = gp::random_tree(
        texsyn::ValueType::Texture, params.genome_max_size, rng);
    ex.image = texsyn::render_genome_image(scene.background_genome,
                                           params.image_edge);
  }

  const int disk_count = ex.style == 1 ? 1 : 3;
  scene.centers_px = place_fcd_disks(disk_count, params, rng);
  scene.genomes.clear();
  if (ex.style == 3) {
    const auto one = gp::random_tree(texsyn::ValueType::Texture,
                                     params.genome_max_size, rng);
    for (int i = 0; i < 3; ++i) scene.genomes.push_back(one);
  } else {
    for (int i = 0; i < disk_count; ++i)
      scene.genomes.push_back(gp::random_tree(texsyn::ValueType::Texture,
                                              params.genome_max_size, rng));
  }

  scene.muting.assign(disk_count, MutedDisk{});
  if (disk_count == 3) {
    scene.label_disk = static_cast<int>(rng.uniform_int(0, 2));
    const MuteMode mode = rng.coin() ? MuteMode::Blend : MuteMode::Dither;
    for (int i = 0; i < 3; ++i) {
      if (i == scene.label_disk) continue;
      MutedDisk m;
      m.mode = mode;
      m.amount = mode == MuteMode::Blend ? rng.uniform(0.2, 0.8)
                                         : rng.uniform(0.5, 0.9);
      scene.muting[i] = m;
    }
  } else {
    scene.label_disk = 0;
  }

  draw_scene_disks(ex.image, scene, params);
  const Vec2 c = scene.centers_px[scene.label_disk];
  ex.label = {c.x / params.image_edge, c.y / params.image_edge};
  return ex;
}

std::vector<FcdExample> fcd_dataset(int n, Rng& rng,
                                    const sim::BackgroundSet* photos,
                                    const FcdParams& params) {
  if (n < 1) throw std::invalid_argument("fcd_dataset: need n >= 1");
  std::vector<FcdExample> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i)
    out.push_back(fcd_generate(rng, photos, params));
  return out;
}

std::string save_fcd_dataset(const std::vector<FcdExample>& dataset,
                             const std::string& directory,
                             std::vector<std::string>* written) {
  std::filesystem::create_directories(directory);
  const std::string manifest_path = directory + "/fcd_manifest.tsv";
  std::ofstream manifest(manifest_path);
  if (!manifest)
    throw std::runtime_error("cannot write manifest: " + manifest_path);
  char buf[64];
  for (size_t i = 0; i < dataset.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "fcd_%06zu.png", i);
    const std::string name = buf;
    write_png(dataset[i].image, directory + "/" + name);
    if (written) written->push_back(directory + "/" + name);
    std::snprintf(buf, sizeof(buf), "%.17g\t%.17g", dataset[i].label.x,
                  dataset[i].label.y);
    manifest << name << '\t' << buf << '\t' << dataset[i].style << '\n';
  }
  if (written) written->push_back(manifest_path);
  return manifest_path;
}

Image render_fcd_scene(const FcdScene& scene, const sim::BackgroundSet* photos,
                       const FcdParams& params) {
  Image img;
  if (scene.photo_background) {
    if (!has_photos(photos))
      throw std::invalid_argument("render_fcd_scene: photos required");
    img = background_from_crop(*photos, params, scene.crop);
  } else {
    img = texsyn::render_genome_image(scene.background_genome,
                                      params.image_edge);
  }
  draw_scene_disks(img, scene, params);
  return img;
}

}  // namespace camo::predator
