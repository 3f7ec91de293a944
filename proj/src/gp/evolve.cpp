#include "camo/gp/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace camo::gp {

using texsyn::GenomeNode;
using texsyn::OpCode;
using texsyn::OpSignature;
using texsyn::function_set;
using texsyn::leaf_range;
using texsyn::min_tree_size;
using texsyn::signature;
using texsyn::tree_size;

namespace {

GenomeNode random_leaf(ValueType type, Rng& rng) {
  GenomeNode n;
  const auto r = leaf_range(type);
  switch (type) {
    case ValueType::Color:
      n.op = OpCode::LeafColor;
      for (int i = 0; i < 3; ++i) n.value[i] = rng.uniform(r.lo, r.hi);
      break;
    case ValueType::Point:
      n.op = OpCode::LeafPoint;
      for (int i = 0; i < 2; ++i) n.value[i] = rng.uniform(r.lo, r.hi);
      break;
    case ValueType::Float01:
      n.op = OpCode::LeafFloat01;
      n.value[0] = rng.uniform(r.lo, r.hi);
      break;
    case ValueType::FloatPlus:
      n.op = OpCode::LeafFloatPlus;
      n.value[0] = rng.uniform(r.lo, r.hi);
      break;
    case ValueType::Angle:
      n.op = OpCode::LeafAngle;
      n.value[0] = rng.uniform(r.lo, r.hi);
      break;
    default:
      throw std::logic_error("random_leaf: not a leaf type");
  }
  return n;
}

// grow toward the budget: non-final texture children get a random share,
// the last texture child absorbs what is left
GenomeNode grow(ValueType type, int budget, Rng& rng) {
  if (type != ValueType::Texture) return random_leaf(type, rng);

  std::vector<const OpSignature*> candidates;
  for (const auto& s : function_set())
    if (s.return_type == ValueType::Texture && s.min_tree_size <= budget)
      candidates.push_back(&s);
  if (candidates.empty())
    throw std::invalid_argument("random_tree: budget below minimal tree");

  const OpSignature& sig =
      *candidates[static_cast<size_t>(rng.uniform_int(0, candidates.size() - 1))];

  GenomeNode n;
  n.op = sig.code;
  int remaining = budget - 1;
  // minimal sizes still owed to the params after index i
  std::vector<int> owed_after(sig.params.size() + 1, 0);
  for (size_t i = sig.params.size(); i-- > 0;)
    owed_after[i] = owed_after[i + 1] + min_tree_size(sig.params[i]);
  int last_texture = -1;
  for (size_t i = 0; i < sig.params.size(); ++i)
    if (sig.params[i] == ValueType::Texture) last_texture = static_cast<int>(i);

  for (size_t i = 0; i < sig.params.size(); ++i) {
    const ValueType pt = sig.params[i];
    const int avail = remaining - owed_after[i + 1];
    int child_budget = min_tree_size(pt);
    if (pt == ValueType::Texture) {
      child_budget = static_cast<int>(i) == last_texture
                         ? avail
                         : static_cast<int>(rng.uniform_int(min_tree_size(pt), avail));
    }
    n.children.push_back(grow(pt, child_budget, rng));
    remaining -= tree_size(n.children.back());
  }
  return n;
}

struct NodeRef {
  GenomeNode* node;
  int subtree_size;
};

void flatten(GenomeNode& n, std::vector<NodeRef>& out) {
  out.push_back({&n, tree_size(n)});
  for (auto& c : n.children) flatten(c, out);
}

void flatten_const(const GenomeNode& n, std::vector<const GenomeNode*>& out) {
  out.push_back(&n);
  for (const auto& c : n.children) flatten_const(c, out);
}

void jiggle(GenomeNode& n, double fraction, Rng& rng) {
  const OpSignature& sig = signature(n.op);
  if (sig.params.empty()) {
    const auto r = leaf_range(sig.return_type);
    const double magnitude = fraction * (r.hi - r.lo);
    const int components = sig.return_type == ValueType::Color    ? 3
                           : sig.return_type == ValueType::Point ? 2
                                                                 : 1;
    for (int i = 0; i < components; ++i) {
      n.value[i] += rng.uniform(-magnitude, magnitude);
      n.value[i] = clamp_to_range(n.value[i], sig.return_type);
    }
    return;
  }
  for (auto& c : n.children) jiggle(c, fraction, rng);
}

}  // namespace

double clamp_to_range(double v, ValueType leaf_type) {
  const auto r = leaf_range(leaf_type);
  return std::clamp(v, r.lo, r.hi);
}

TextureGenome random_tree(ValueType return_type, int max_size, Rng& rng) {
  if (max_size < min_tree_size(return_type))
    throw std::invalid_argument(
        "random_tree: max_size below the smallest tree for this type");
  return TextureGenome{grow(return_type, max_size, rng)};
}

CrossoverResult crossover(const TextureGenome& recipient,
                          const TextureGenome& donor, int min_size,
                          int max_size, Rng& rng, int attempts) {
  TextureGenome offspring = recipient;
  std::vector<NodeRef> rec_nodes;
  flatten(offspring.root, rec_nodes);
  std::vector<const GenomeNode*> donor_nodes;
  flatten_const(donor.root, donor_nodes);
  const int recipient_size = tree_size(offspring.root);

  GenomeNode* best_target = nullptr;
  const GenomeNode* best_source = nullptr;
  int best_distance = std::numeric_limits<int>::max();

  for (int a = 0; a < attempts; ++a) {
    const NodeRef& target =
        rec_nodes[static_cast<size_t>(rng.uniform_int(0, rec_nodes.size() - 1))];
    const ValueType slot = target.node->type();
    std::vector<const GenomeNode*> compatible;
    for (const GenomeNode* d : donor_nodes)
      if (d->type() == slot) compatible.push_back(d);
    if (compatible.empty()) continue;
    const GenomeNode* source =
        compatible[static_cast<size_t>(rng.uniform_int(0, compatible.size() - 1))];

    const int size = recipient_size - target.subtree_size + tree_size(*source);
    if (size >= min_size && size <= max_size) {
      *target.node = *source;
      return {std::move(offspring), false};
    }
    const int dist = size < min_size ? min_size - size : size - max_size;
    if (dist < best_distance) {
      best_distance = dist;
      best_target = target.node;
      best_source = source;
    }
  }

  if (best_target == nullptr) {
    // every attempt drew a slot type absent from the donor; swap roots,
    // which are always type-compatible
    best_target = &offspring.root;
    best_source = &donor.root;
  }
  *best_target = *best_source;
  return {std::move(offspring), true};
}

TextureGenome mutate_leaves(const TextureGenome& genome, double jiggle_fraction,
                            Rng& rng) {
  TextureGenome out = genome;
  jiggle(out.root, jiggle_fraction, rng);
  return out;
}

}  // namespace camo::gp
