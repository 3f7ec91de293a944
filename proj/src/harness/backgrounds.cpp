#include "camo/harness/backgrounds.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "camo/core/image_io.hpp"

namespace camo::harness {

sim::BackgroundSet load_background_set(const std::string& directory,
                                       double scale, int required_edge) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(directory))
    throw std::runtime_error("background directory not found: " + directory);
  if (scale <= 0.0)
    throw std::runtime_error("background scale must be positive");

  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg")
      names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  if (names.empty())
    throw std::runtime_error("no background images in " + directory);

  sim::BackgroundSet set;
  set.directory = directory;
  set.scale = scale;
  for (const std::string& name : names) {
    const std::string path = directory + "/" + name;
    Image img = read_image(path);  // throws with the file name on failure
    const int w = std::max(1, static_cast<int>(std::lround(img.width() * scale)));
    const int h = std::max(1, static_cast<int>(std::lround(img.height() * scale)));
    if (w != img.width() || h != img.height())
      img = bilinear_resize(img, w, h);
    if (img.width() < required_edge || img.height() < required_edge)
      throw std::runtime_error(
          path + ": scaled to " + std::to_string(img.width()) + "x" +
          std::to_string(img.height()) + ", smaller than the required " +
          std::to_string(required_edge) + " crop");
    set.images.push_back(std::move(img));
    set.names.push_back(name);
  }
  return set;
}

}  // namespace camo::harness
