#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "camo/core/image.hpp"
#include "camo/core/rng.hpp"
#include "camo/gp/population.hpp"
#include "camo/predator/agent.hpp"
#include "camo/sim/background.hpp"
#include "camo/sim/placement.hpp"
#include "camo/texsyn/render.hpp"
#include "camo/vision/net.hpp"

namespace camo::sim {

enum class PredatorMode { Learning, Stub };
enum class FineTuneLabelMode { NearestTruth, OwnPrediction };

// normalized prediction for stub predator `slot`, given the ground-truth
// centers of the current tournament (tests aim stubs at known prey)
using StubPolicy =
    std::function<Vec2(int slot, const std::array<Vec2, 3>& centers_px)>;

struct SimConfig {
  int prey_population = 400;
  int demes = 20;
  int predator_population = 40;
  int max_init_tree_size = 100;
  gp::ReproductionParams reproduction;

  int tournament_edge = 512;
  int prey_diameter = 100;
  int net_input_edge = 128;

  PredatorMode predator_mode = PredatorMode::Learning;
  FineTuneLabelMode label_mode = FineTuneLabelMode::NearestTruth;
  StubPolicy stub_policy;  // stub mode only; unset draws uniform predictions
  double fine_tune_lr = 1e-4;
  int fine_tune_batch = 32;
  double predator_noise = predator::kOffspringNoise;
  double starvation_threshold = predator::kStarvationThreshold;
  int starvation_window = predator::kHistoryWindow;

  PlacementGeometry placement() const {
    return {tournament_edge, prey_diameter};
  }
  void validate() const;
};

// Everything one step records; enough to replay the scoring offline.
struct TournamentRecord {
  int64_t step = 0;  // 1-based
  int deme = 0;
  CropInfo crop;
  std::array<uint64_t, 3> prey_ids{};
  std::array<Vec2, 3> prey_centers{};  // tournament-frame pixels
  // predators in rank order (ascending aim error)
  std::array<uint64_t, 3> predator_ids{};
  std::array<Vec2, 3> predictions{};  // tournament-frame pixels
  std::array<double, 3> aim_errors{};
  int64_t eaten_prey_id = -1;        // -1: all predators failed
  int64_t starved_predator_id = -1;  // -1: none
  Image composite;                   // the tournament image
};

// The coevolution loop of one run: each step stages a three-prey,
// three-predator tournament, feeds the predators, and applies negative
// selection on both sides.
class Simulation {
 public:
  // `initial_prey`, when given, resumes from a population checkpoint
  // instead of growing random trees; the config's population/deme counts
  // are taken from it.
  Simulation(SimConfig config, const BackgroundSet* backgrounds,
             const vision::Net<float>* pretrained, uint64_t seed,
             std::optional<gp::PreyPopulation> initial_prey = {});

  TournamentRecord step();
  int64_t steps_done() const { return steps_done_; }

  const gp::PreyPopulation& prey() const { return prey_; }
  gp::PreyPopulation& prey() { return prey_; }
  const std::vector<predator::PredatorAgent>& predators() const {
    return predators_;
  }
  std::vector<predator::PredatorAgent>& predators() { return predators_; }

  const SimConfig& config() const { return config_; }
  // count of crossovers that needed the size fallback so far
  int64_t size_fallback_count() const { return size_fallbacks_; }

 private:
  Vec2 agent_predict(predator::PredatorAgent& agent,
                     const std::vector<float>& chw, int slot,
                     const std::array<Vec2, 3>& centers);
  const texsyn::DiskRaster& disk_for(const gp::PreyIndividual& ind);

  SimConfig config_;
  const BackgroundSet* backgrounds_;
  gp::PreyPopulation prey_;
  std::vector<predator::PredatorAgent> predators_;
  uint64_t next_predator_id_ = 0;
  int64_t steps_done_ = 0;
  int64_t size_fallbacks_ = 0;

  Rng prey_rng_, predator_rng_, crop_rng_, placement_rng_, stub_rng_;
  std::unordered_map<uint64_t, texsyn::DiskRaster> disk_cache_;
};

}  // namespace camo::sim
