#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "camo/texsyn/types.hpp"

namespace camo::texsyn {

// Semantic types of the strongly typed function set. Every child slot of
// an operator declares one of these, and crossover only splices subtrees
// whose return type matches the slot.
enum class ValueType : uint8_t {
  Texture,
  Color,
  Point,
  Float01,    // scalar in [0,1]
  FloatPlus,  // scalar in [0,10]
  Angle,      // radians in [0,2*pi]
};

enum class OpCode : uint8_t {
  // texture operators
  Uniform,
  Spot,
  Grating,
  LotsOfSpots,
  Noise,
  ColorNoise,
  Blend,
  SoftMatte,
  Add,
  Multiply,
  Scale,
  Rotate,
  Translate,
  Warp,
  // typed constant leaves
  LeafColor,
  LeafPoint,
  LeafFloat01,
  LeafFloatPlus,
  LeafAngle,
};

struct OpSignature {
  OpCode code;
  const char* name;
  ValueType return_type;
  std::vector<ValueType> params;  // empty for leaves
  // smallest node count of a complete tree rooted at this constructor
  int min_tree_size;
};

// The closed function set. Contains a leaf constructor for every non-
// Texture type and Uniform as the smallest Texture constructor.
const std::vector<OpSignature>& function_set();
const OpSignature& signature(OpCode code);
// Smallest complete tree size for a slot of the given type.
int min_tree_size(ValueType type);
// Inclusive per-component constant range of a leaf type.
struct Range {
  double lo, hi;
};
Range leaf_range(ValueType type);

// One node of an operator tree. Leaves carry their constant in `value`
// (rgb for colors, xy for points, a scalar in value[0] otherwise).
struct GenomeNode {
  OpCode op = OpCode::LeafFloat01;
  std::array<double, 3> value{};
  std::vector<GenomeNode> children;

  bool operator==(const GenomeNode&) const = default;
  ValueType type() const { return signature(op).return_type; }
};

// A prey texture program: a type-correct operator tree with Texture root.
struct TextureGenome {
  GenomeNode root;
  bool operator==(const TextureGenome&) const = default;
};

int tree_size(const GenomeNode& node);
inline int tree_size(const TextureGenome& g) { return tree_size(g.root); }

// Full signature conformance: arity and child return types everywhere,
// plus leaf constants within their declared ranges.
bool type_check(const GenomeNode& node);
inline bool type_check(const TextureGenome& g) {
  return g.root.type() == ValueType::Texture && type_check(g.root);
}

// Canonical nested-expression text form, e.g.
//   Blend(0.25, Uniform(Color(1, 0, 0)), Noise(2, Vec2(0, 0), ..., ...))
// Scalars are printed with enough digits to round-trip exactly.
std::string to_text(const TextureGenome& g);
std::string to_text(const GenomeNode& node);

// Inverse of to_text. Throws std::runtime_error on malformed input or a
// tree that fails the type check.
TextureGenome parse_genome(const std::string& text);

}  // namespace camo::texsyn
