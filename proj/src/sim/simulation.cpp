#include "camo/sim/simulation.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "camo/texsyn/render.hpp"

namespace camo::sim {
namespace {

gp::PreyPopulation make_initial_population(const SimConfig& config,
                                           uint64_t seed) {
  config.validate();
  Rng init_rng = Rng(seed).derive("prey-init");
  return gp::PreyPopulation(config.prey_population, config.demes,
                            config.max_init_tree_size, init_rng);
}

}  // namespace

void SimConfig::validate() const {
  if (prey_population < 1 || demes < 1 || prey_population % demes != 0)
    throw std::invalid_argument("SimConfig: prey population must divide into demes");
  if (prey_population / demes < 3)
    throw std::invalid_argument("SimConfig: demes need at least 3 individuals");
  if (predator_population < 3)
    throw std::invalid_argument("SimConfig: need at least 3 predators");
  if (tournament_edge % net_input_edge != 0)
    throw std::invalid_argument(
        "SimConfig: net input edge must divide the tournament edge");
  if (prey_diameter < 1 || prey_diameter > tournament_edge / 2)
    throw std::invalid_argument("SimConfig: bad prey diameter");
  if (fine_tune_batch < 1)
    throw std::invalid_argument("SimConfig: bad fine-tune batch");
}

Simulation::Simulation(SimConfig config, const BackgroundSet* backgrounds,
                       const vision::Net<float>* pretrained, uint64_t seed,
                       std::optional<gp::PreyPopulation> initial_prey)
    : config_(config),
      backgrounds_(backgrounds),
      prey_(initial_prey ? std::move(*initial_prey)
                         : make_initial_population(config, seed)),
      prey_rng_(Rng(seed).derive("prey-evolution")),
      predator_rng_(Rng(seed).derive("predator-evolution")),
      crop_rng_(Rng(seed).derive("cropping")),
      placement_rng_(Rng(seed).derive("placement")),
      stub_rng_(Rng(seed).derive("stub")) {
  if (backgrounds_ == nullptr || backgrounds_->images.empty())
    throw std::invalid_argument("Simulation: background set required");
  if (initial_prey) {
    config_.prey_population = prey_.size();
    config_.demes = prey_.demes();
    config_.validate();
  }

  if (config_.predator_mode == PredatorMode::Learning) {
    if (pretrained == nullptr)
      throw std::invalid_argument(
          "Simulation: learning predators need a pretrained net");
    if (pretrained->spec().input_edge != config_.net_input_edge)
      throw std::invalid_argument(
          "Simulation: pretrained net input size does not match config");
    predators_ = predator::init_predators(*pretrained,
                                          config_.predator_population,
                                          predator_rng_, 0,
                                          config_.predator_noise);
  } else {
    for (int i = 0; i < config_.predator_population; ++i) {
      predator::PredatorAgent a;
      a.id = static_cast<uint64_t>(i);
      predators_.push_back(std::move(a));
    }
  }
  next_predator_id_ = static_cast<uint64_t>(config_.predator_population);
}

Vec2 Simulation::agent_predict(predator::PredatorAgent& agent,
                               const std::vector<float>& chw, int slot,
                               const std::array<Vec2, 3>& centers) {
  if (config_.predator_mode == PredatorMode::Stub || !agent.net) {
    if (config_.stub_policy) return config_.stub_policy(slot, centers);
    return {stub_rng_.uniform(), stub_rng_.uniform()};
  }
  return agent.net->predict(chw.data());
}

const texsyn::DiskRaster& Simulation::disk_for(const gp::PreyIndividual& ind) {
  auto it = disk_cache_.find(ind.id);
  if (it == disk_cache_.end())
    it = disk_cache_
             .emplace(ind.id,
                      texsyn::render_disk(ind.genome, config_.prey_diameter))
             .first;
  return it->second;
}

TournamentRecord Simulation::step() {
  const int prey_before = prey_.size();
  const size_t predators_before = predators_.size();

  TournamentRecord rec;
  rec.step = ++steps_done_;
  rec.deme = static_cast<int>((rec.step - 1) % config_.demes);

  // participants
  const std::array<size_t, 3> prey_idx =
      prey_.tournament_draw(rec.deme, prey_rng_);
  std::array<size_t, 3> pred_idx{};
  for (int k = 0; k < 3; ++k) {
    size_t candidate;
    bool fresh;
    do {
      candidate = static_cast<size_t>(
          predator_rng_.uniform_int(0, static_cast<int64_t>(predators_.size()) - 1));
      fresh = true;
      for (int j = 0; j < k; ++j)
        if (pred_idx[j] == candidate) fresh = false;
    } while (!fresh);
    pred_idx[k] = candidate;
  }

  // stage the scene
  Image composite =
      random_crop(*backgrounds_, config_.tournament_edge, crop_rng_, &rec.crop);
  const std::array<Vec2, 3> centers =
      place_prey(placement_rng_, config_.placement());
  const double radius = config_.prey_diameter / 2.0;
  for (int i = 0; i < 3; ++i) {
    const gp::PreyIndividual& ind = prey_.at(prey_idx[i]);
    rec.prey_ids[i] = ind.id;
    rec.prey_centers[i] = centers[i];
    const texsyn::DiskRaster& disk = disk_for(ind);
    texsyn::blit_disk(composite, disk,
                      static_cast<int>(centers[i].x) - config_.prey_diameter / 2,
                      static_cast<int>(centers[i].y) - config_.prey_diameter / 2);
  }

  const Image small = box_downsample(
      composite, config_.tournament_edge / config_.net_input_edge);
  const std::vector<float> chw = to_chw(small);

  // predictions, scored by aim error = distance to the nearest prey center
  struct Scored {
    size_t agent_index;
    Vec2 prediction_px;
    double aim_error;
  };
  std::array<Scored, 3> scored{};
  for (int i = 0; i < 3; ++i) {
    predator::PredatorAgent& agent = predators_[pred_idx[i]];
    const Vec2 norm = agent_predict(agent, chw, i, centers);
    const Vec2 px = norm * static_cast<double>(config_.tournament_edge);
    double best = std::numeric_limits<double>::infinity();
    for (const Vec2& c : centers) best = std::min(best, distance(px, c));
    scored[i] = {pred_idx[i], px, best};
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const Scored& a, const Scored& b) {
                     return a.aim_error < b.aim_error;
                   });
  for (int i = 0; i < 3; ++i) {
    rec.predator_ids[i] = predators_[scored[i].agent_index].id;
    rec.predictions[i] = scored[i].prediction_px;
    rec.aim_errors[i] = scored[i].aim_error;
  }

  // prey resolution: the best predator eats iff its estimate is inside a
  // disk (distance <= radius, inclusive); otherwise the step is abandoned
  // and all prey survive
  if (rec.aim_errors[0] <= radius) {
    int eaten = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
      const double dist = distance(rec.predictions[0], centers[i]);
      if (dist < best) {
        best = dist;
        eaten = i;
      }
    }
    rec.eaten_prey_id = static_cast<int64_t>(rec.prey_ids[eaten]);
    const size_t parent_a = prey_idx[(eaten + 1) % 3];
    const size_t parent_b = prey_idx[(eaten + 2) % 3];
    bool fallback = false;
    prey_.replace_eaten(prey_idx[eaten], parent_a, parent_b,
                        config_.reproduction, prey_rng_, &fallback);
    if (fallback) ++size_fallbacks_;
    disk_cache_.erase(rec.prey_ids[eaten]);
  }

  // predators: every participant remembers the tournament image (with its
  // own label) and fine-tunes once, then records its outcome; the worst,
  // if it missed every disk, may starve and be replaced by a noisy copy of
  // one of the other two
  std::array<bool, 3> starved_flags{};
  std::array<bool, 3> success{};
  for (int i = 0; i < 3; ++i) {
    predator::PredatorAgent& agent = predators_[scored[i].agent_index];

    Vec2 label_px = scored[i].prediction_px;
    if (config_.label_mode == FineTuneLabelMode::NearestTruth) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec2& c : centers) {
        const double dist = distance(scored[i].prediction_px, c);
        if (dist < best) {
          best = dist;
          label_px = c;
        }
      }
    }
    predator::TrainExample example;
    example.chw = chw;
    example.label = label_px * (1.0 / config_.tournament_edge);
    reservoir_add(agent, std::move(example), predator_rng_);
    fine_tune(agent, predator_rng_, config_.fine_tune_lr,
              config_.fine_tune_batch);

    success[i] = scored[i].aim_error <= radius;
    starved_flags[i] = record_and_check_starvation(
        agent, success[i], config_.starvation_threshold,
        config_.starvation_window);
  }
  if (!success[2] && starved_flags[2]) {
    const size_t worst = scored[2].agent_index;
    rec.starved_predator_id = static_cast<int64_t>(predators_[worst].id);
    const std::vector<const predator::PredatorAgent*> parents = {
        &predators_[scored[0].agent_index], &predators_[scored[1].agent_index]};
    predators_[worst] = predator::spawn_predator_offspring(
        parents, predator_rng_, next_predator_id_++, config_.predator_noise);
  }

  if (prey_.size() != prey_before || predators_.size() != predators_before)
    throw std::logic_error("Simulation: population size drifted");

  rec.composite = std::move(composite);
  return rec;
}

}  // namespace camo::sim
