#include "camo/gp/population.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace camo::gp {

PreyPopulation::PreyPopulation(int n, int demes, int max_init_tree_size,
                               Rng& rng)
    : demes_(demes) {
  if (n < 1 || demes < 1 || n % demes != 0)
    throw std::invalid_argument(
        "PreyPopulation: population must divide evenly into demes");
  individuals_.reserve(n);
  for (int i = 0; i < n; ++i) {
    PreyIndividual ind;
    ind.id = next_id_++;
    ind.deme = i / (n / demes);
    ind.genome = random_tree(ValueType::Texture, max_init_tree_size, rng);
    individuals_.push_back(std::move(ind));
  }
}

PreyPopulation::PreyPopulation(std::vector<PreyIndividual> individuals,
                               int demes)
    : individuals_(std::move(individuals)), demes_(demes) {
  if (individuals_.empty() || demes < 1 ||
      individuals_.size() % static_cast<size_t>(demes) != 0)
    throw std::invalid_argument("PreyPopulation: bad deme partition");
  for (const auto& ind : individuals_)
    next_id_ = std::max(next_id_, ind.id + 1);
}

std::array<size_t, 3> PreyPopulation::tournament_draw(int deme,
                                                      Rng& rng) const {
  const int ds = deme_size();
  if (deme < 0 || deme >= demes_)
    throw std::out_of_range("tournament_draw: bad deme index");
  if (ds < 3)
    throw std::invalid_argument("tournament_draw: deme smaller than 3");
  const size_t base = static_cast<size_t>(deme) * ds;
  std::array<size_t, 3> picks{};
  for (int k = 0; k < 3; ++k) {
    size_t candidate;
    bool fresh;
    do {
      candidate = base + static_cast<size_t>(rng.uniform_int(0, ds - 1));
      fresh = true;
      for (int j = 0; j < k; ++j)
        if (picks[j] == candidate) fresh = false;
    } while (!fresh);
    picks[k] = candidate;
  }
  return picks;
}

uint64_t PreyPopulation::replace_eaten(size_t eaten, size_t parent_a,
                                       size_t parent_b,
                                       const ReproductionParams& params,
                                       Rng& rng, bool* size_fallback) {
  const int deme = deme_of(eaten);
  if (deme_of(parent_a) != deme || deme_of(parent_b) != deme)
    throw std::invalid_argument("replace_eaten: parents from another deme");

  const bool a_is_recipient = rng.coin();
  const TextureGenome& recipient =
      individuals_[a_is_recipient ? parent_a : parent_b].genome;
  const TextureGenome& donor =
      individuals_[a_is_recipient ? parent_b : parent_a].genome;

  CrossoverResult cross =
      crossover(recipient, donor, params.min_crossover_size,
                params.max_crossover_size, rng);
  if (size_fallback) *size_fallback = cross.size_fallback;

  PreyIndividual offspring;
  offspring.id = next_id_++;
  offspring.deme = deme;
  offspring.genome =
      mutate_leaves(cross.offspring, params.jiggle_fraction, rng);
  individuals_[eaten] = std::move(offspring);
  return individuals_[eaten].id;
}

uint64_t PreyPopulation::content_hash() const {
  uint64_t h = 0xcbf29ce484222325ull;
  const auto feed = [&h](const std::string& s) {
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ull;
    }
  };
  for (const auto& ind : individuals_) {
    feed(std::to_string(ind.id));
    feed("|");
    feed(std::to_string(ind.deme));
    feed("|");
    feed(texsyn::to_text(ind.genome));
    feed("\n");
  }
  return h;
}

void PreyPopulation::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write population: " + path);
  for (const auto& ind : individuals_)
    out << ind.id << '\t' << ind.deme << '\t' << texsyn::to_text(ind.genome)
        << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

PreyPopulation PreyPopulation::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read population: " + path);
  std::vector<PreyIndividual> individuals;
  int max_deme = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    PreyIndividual ind;
    std::string genome_text;
    if (!(row >> ind.id >> ind.deme) || !std::getline(row, genome_text))
      throw std::runtime_error("malformed population line: " + line);
    ind.genome = texsyn::parse_genome(genome_text);
    max_deme = std::max(max_deme, ind.deme);
    individuals.push_back(std::move(ind));
  }
  return PreyPopulation(std::move(individuals), max_deme + 1);
}

}  // namespace camo::gp
