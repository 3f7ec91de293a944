#pragma once

#include <functional>
#include <vector>

#include "camo/core/rng.hpp"
#include "camo/predator/fcd.hpp"
#include "camo/vision/net.hpp"
#include "camo/vision/spec.hpp"

namespace camo::predator {

struct PretrainConfig {
  int epochs = 25;  // effective-dataset passes (20,000 -> 500,000 scale)
  int batch = 32;
  double learning_rate = 1e-3;
};

// Trains a fresh net on the FCD task. Every example is re-augmented each
// epoch, so the effective dataset grows with the epoch count. Non-finite
// loss aborts with an exception. `on_epoch(epoch, mean_loss)` is optional.
vision::Net<float> pretrain(
    const vision::ConvNetSpec& spec, const std::vector<FcdExample>& dataset,
    const PretrainConfig& config, Rng& rng,
    const std::function<void(int, double)>& on_epoch = {});

}  // namespace camo::predator
