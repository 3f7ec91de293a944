#include "camo/predator/agent.hpp"

#include <iostream>
#include <stdexcept>

namespace camo::predator {

void reservoir_add(PredatorAgent& agent, TrainExample example, Rng& rng,
                   int capacity) {
  if (static_cast<int>(agent.reservoir.size()) < capacity) {
    agent.reservoir.push_back(std::move(example));
    return;
  }
  const size_t slot =
      static_cast<size_t>(rng.uniform_int(0, capacity - 1));
  agent.reservoir[slot] = std::move(example);
}

bool record_and_check_starvation(PredatorAgent& agent, bool success,
                                 double threshold, int window) {
  agent.history.push_back(success);
  while (static_cast<int>(agent.history.size()) > window)
    agent.history.pop_front();
  if (static_cast<int>(agent.history.size()) < window) return false;
  return agent.success_fraction() < threshold;
}

bool fine_tune(PredatorAgent& agent, Rng& rng, double learning_rate,
               int batch) {
  if (agent.reservoir.empty()) {
    if (agent.net)
      std::cerr << "warning: fine_tune skipped, predator " << agent.id
                << " has an empty reservoir\n";
    return false;
  }
  if (!agent.net) return false;
  const int n = std::min<int>(batch, static_cast<int>(agent.reservoir.size()));

  // uniform minibatch without replacement (partial Fisher-Yates)
  std::vector<size_t> order(agent.reservoir.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (int i = 0; i < n; ++i) {
    const size_t j = static_cast<size_t>(
        rng.uniform_int(i, static_cast<int64_t>(order.size()) - 1));
    std::swap(order[i], order[j]);
  }

  const size_t image_size = agent.net->input_size();
  std::vector<float> x(static_cast<size_t>(n) * image_size);
  std::vector<Vec2> labels(n);
  for (int i = 0; i < n; ++i) {
    const TrainExample& ex = agent.reservoir[order[i]];
    if (ex.chw.size() != image_size)
      throw std::invalid_argument("fine_tune: reservoir image size mismatch");
    std::copy(ex.chw.begin(), ex.chw.end(), x.begin() + i * image_size);
    labels[i] = ex.label;
  }
  agent.net->train_step(x.data(), labels.data(), n, learning_rate, rng);
  return true;
}

std::vector<PredatorAgent> init_predators(const vision::Net<float>& pretrained,
                                          int n, Rng& rng, uint64_t first_id,
                                          double noise) {
  if (n < 1) throw std::invalid_argument("init_predators: need n >= 1");
  std::vector<PredatorAgent> agents;
  agents.reserve(n);
  for (int i = 0; i < n; ++i) {
    PredatorAgent a;
    a.id = first_id + static_cast<uint64_t>(i);
    a.net = pretrained;
    a.net->perturb(noise, rng);
    agents.push_back(std::move(a));
  }
  return agents;
}

PredatorAgent spawn_predator_offspring(
    const std::vector<const PredatorAgent*>& parents, Rng& rng,
    uint64_t fresh_id, double noise) {
  if (parents.empty())
    throw std::invalid_argument("spawn_predator_offspring: no parents");
  const PredatorAgent& parent = *parents[static_cast<size_t>(
      rng.uniform_int(0, static_cast<int64_t>(parents.size()) - 1))];
  PredatorAgent child;
  child.id = fresh_id;
  if (parent.net) {
    child.net = parent.net;
    child.net->perturb(noise, rng);
  }
  return child;
}

}  // namespace camo::predator
