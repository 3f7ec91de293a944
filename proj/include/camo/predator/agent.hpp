#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "camo/core/rng.hpp"
#include "camo/core/vec2.hpp"
#include "camo/vision/net.hpp"

namespace camo::predator {

// One labeled training image in a predator's memory, stored at the net's
// input size as a planar CHW tensor.
struct TrainExample {
  std::vector<float> chw;
  Vec2 label;  // normalized [0,1]^2
};

inline constexpr int kReservoirCapacity = 500;
inline constexpr int kHistoryWindow = 20;
inline constexpr double kStarvationThreshold = 0.40;
inline constexpr double kOffspringNoise = 0.003;

// A hunting agent: conv-net parameters plus a bounded memory of labeled
// tournament images and a bounded history of hunting outcomes. Agents in
// stub mode (deterministic test predators) carry no net.
struct PredatorAgent {
  uint64_t id = 0;
  std::optional<vision::Net<float>> net;
  std::vector<TrainExample> reservoir;  // <= kReservoirCapacity
  std::deque<bool> history;             // <= kHistoryWindow

  double success_fraction() const {
    if (history.empty()) return 0.0;
    int hits = 0;
    for (bool h : history) hits += h ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(history.size());
  }
};

// Collect-then-replace memory: append while below capacity, afterwards
// overwrite a uniformly random slot.
void reservoir_add(PredatorAgent& agent, TrainExample example, Rng& rng,
                   int capacity = kReservoirCapacity);

// Pushes the outcome (evicting beyond the window) and reports starvation:
// true iff the window is full and the success fraction is below the
// threshold. A part-filled window never starves (warm-up rule).
bool record_and_check_starvation(PredatorAgent& agent, bool success,
                                 double threshold = kStarvationThreshold,
                                 int window = kHistoryWindow);

// One Adam step on a uniform random minibatch of min(batch, reservoir)
// examples. No-op (returns false) when the reservoir is empty.
bool fine_tune(PredatorAgent& agent, Rng& rng, double learning_rate = 1e-4,
               int batch = 32);

// n agents, each a copy of the pre-trained net with +-noise added to every
// parameter, empty reservoir and history.
std::vector<PredatorAgent> init_predators(const vision::Net<float>& pretrained,
                                          int n, Rng& rng,
                                          uint64_t first_id = 0,
                                          double noise = kOffspringNoise);

// Noisy copy of a uniformly chosen parent; fresh id, empty memory.
PredatorAgent spawn_predator_offspring(
    const std::vector<const PredatorAgent*>& parents, Rng& rng,
    uint64_t fresh_id, double noise = kOffspringNoise);

}  // namespace camo::predator
