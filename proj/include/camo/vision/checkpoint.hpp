#pragma once

#include <string>

#include "camo/vision/net.hpp"

namespace camo::vision {

// Parameter checkpoint: a flat binary container of named float32 arrays
// behind a JSON manifest (name, shape, offset). Save/load round-trips are
// bit-exact.
void save_checkpoint(const Net<float>& net, const std::string& path);
Net<float> load_checkpoint(const std::string& path);

}  // namespace camo::vision
