#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "camo/core/rng.hpp"
#include "camo/gp/evolve.hpp"
#include "camo/texsyn/genome.hpp"

namespace camo::gp {

struct PreyIndividual {
  uint64_t id = 0;
  int deme = 0;
  TextureGenome genome;
};

struct ReproductionParams {
  int min_crossover_size = 50;
  int max_crossover_size = 150;
  double jiggle_fraction = 0.05;
};

// Steady-state prey population partitioned into equal demes. Tournaments
// and replacement are intra-deme; the total size never changes.
class PreyPopulation {
 public:
  // n random individuals (trees grown up to max_init_tree_size)
  PreyPopulation(int n, int demes, int max_init_tree_size, Rng& rng);
  // restore from checkpoint lines (see save/load)
  PreyPopulation(std::vector<PreyIndividual> individuals, int demes);

  int size() const { return static_cast<int>(individuals_.size()); }
  int demes() const { return demes_; }
  int deme_size() const { return size() / demes_; }
  int deme_of(size_t index) const { return static_cast<int>(index) / deme_size(); }

  const PreyIndividual& at(size_t index) const { return individuals_[index]; }

  // three distinct individuals drawn uniformly without replacement from
  // the given deme; throws if the deme holds fewer than three
  std::array<size_t, 3> tournament_draw(int deme, Rng& rng) const;

  // Replaces the eaten individual with a mutated crossover offspring of
  // the two parents (recipient chosen by fair coin). The offspring gets a
  // fresh id and the eaten prey's deme slot. Returns the new id; sets
  // *size_fallback when the crossover size rule could not be satisfied.
  uint64_t replace_eaten(size_t eaten, size_t parent_a, size_t parent_b,
                         const ReproductionParams& params, Rng& rng,
                         bool* size_fallback = nullptr);

  // fresh id counter, also used for individuals created outside (tests)
  uint64_t next_id() { return next_id_++; }

  // FNV-1a over all genome texts, ids and demes; used by step-abandonment
  // checks to show the population is untouched
  uint64_t content_hash() const;

  void save(const std::string& path) const;
  static PreyPopulation load(const std::string& path);

 private:
  std::vector<PreyIndividual> individuals_;
  int demes_ = 1;
  uint64_t next_id_ = 0;
};

}  // namespace camo::gp
