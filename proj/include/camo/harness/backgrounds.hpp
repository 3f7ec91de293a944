#pragma once

#include <string>

#include "camo/sim/background.hpp"

namespace camo::harness {

// Loads every PNG/JPEG in the directory (sorted by name), applies bilinear
// scaling, and validates that each scaled image admits a crop of
// `required_edge`. Fatal (std::runtime_error) on an empty directory, an
// undecodable file, or a too-small image.
sim::BackgroundSet load_background_set(const std::string& directory,
                                       double scale, int required_edge = 512);

}  // namespace camo::harness
