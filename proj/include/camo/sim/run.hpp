#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "camo/sim/simulation.hpp"

namespace camo::sim {

inline constexpr uint64_t kDefaultSeed = 1;

struct RunConfig {
  SimConfig sim;
  std::string output_dir = ".";
  int64_t steps = 12000;
  int save_frequency = 19;  // visual log cadence; relatively prime to demes
  int sqm_interval = 0;     // 0 disables the static quality metric
  int sqm_sample = 20;
  int sqm_trials = 10;
  uint64_t seed = kDefaultSeed;
  // resume the prey population from this checkpoint when non-empty
  std::string resume_population;
};

struct RunArtifacts {
  std::vector<std::string> files;  // everything written, for the manifest
  int64_t steps_run = 0;
  int64_t abandoned_steps = 0;  // steps where every predator failed
  int64_t size_fallbacks = 0;
  std::string steps_log_path;
  std::string sqm_log_path;  // empty when disabled
};

// Executes a full run: per-step log, periodic visual log, optional SQM
// records, and population/predator checkpoints. `pretrained` may be null
// only for stub predators with SQM disabled. Partial logs are flushed
// line by line, so a fatal error leaves them readable.
RunArtifacts run(const RunConfig& config, const BackgroundSet& backgrounds,
                 const vision::Net<float>* pretrained);

// One steps.log line; shared with the replay tooling in the tests.
std::string format_step_line(const TournamentRecord& rec);

}  // namespace camo::sim
