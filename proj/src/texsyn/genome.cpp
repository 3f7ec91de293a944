#include "camo/texsyn/genome.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

namespace camo::texsyn {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using VT = ValueType;

std::vector<OpSignature> build_function_set() {
  std::vector<OpSignature> set = {
      {OpCode::Uniform, "Uniform", VT::Texture, {VT::Color}, 0},
      {OpCode::Spot,
       "Spot",
       VT::Texture,
       {VT::Point, VT::Float01, VT::Float01, VT::Texture, VT::Texture},
       0},
      {OpCode::Grating,
       "Grating",
       VT::Texture,
       {VT::Point, VT::Texture, VT::Point, VT::Texture, VT::Float01,
        VT::Float01},
       0},
      {OpCode::LotsOfSpots,
       "LotsOfSpots",
       VT::Texture,
       {VT::Float01, VT::Float01, VT::Float01, VT::Float01, VT::Float01,
        VT::Texture, VT::Texture},
       0},
      {OpCode::Noise,
       "Noise",
       VT::Texture,
       {VT::FloatPlus, VT::Point, VT::Texture, VT::Texture},
       0},
      {OpCode::ColorNoise, "ColorNoise", VT::Texture, {VT::FloatPlus, VT::Point}, 0},
      {OpCode::Blend, "Blend", VT::Texture, {VT::Float01, VT::Texture, VT::Texture}, 0},
      {OpCode::SoftMatte,
       "SoftMatte",
       VT::Texture,
       {VT::Texture, VT::Texture, VT::Texture},
       0},
      {OpCode::Add, "Add", VT::Texture, {VT::Texture, VT::Texture}, 0},
      {OpCode::Multiply, "Multiply", VT::Texture, {VT::Texture, VT::Texture}, 0},
      {OpCode::Scale, "Scale", VT::Texture, {VT::FloatPlus, VT::Texture}, 0},
      {OpCode::Rotate, "Rotate", VT::Texture, {VT::Angle, VT::Texture}, 0},
      {OpCode::Translate, "Translate", VT::Texture, {VT::Point, VT::Texture}, 0},
      {OpCode::Warp, "Warp", VT::Texture, {VT::FloatPlus, VT::FloatPlus, VT::Texture}, 0},
      {OpCode::LeafColor, "Color", VT::Color, {}, 1},
      {OpCode::LeafPoint, "Vec2", VT::Point, {}, 1},
      {OpCode::LeafFloat01, "", VT::Float01, {}, 1},
      {OpCode::LeafFloatPlus, "", VT::FloatPlus, {}, 1},
      {OpCode::LeafAngle, "", VT::Angle, {}, 1},
  };
  // min_tree_size is a fixed point: leaves are 1, Uniform is 2, and every
  // other operator is 1 + sum over params. Two passes settle Texture = 2.
  auto type_min = [&set](VT t) {
    int best = 1 << 20;
    for (const auto& s : set)
      if (s.return_type == t && s.min_tree_size > 0)
        best = std::min(best, s.min_tree_size);
    return best;
  };
  for (int pass = 0; pass < 3; ++pass)
    for (auto& s : set) {
      if (s.params.empty()) continue;
      int total = 1;
      for (VT p : s.params) total += type_min(p);
      s.min_tree_size = total;
    }
  return set;
}

}  // namespace

const std::vector<OpSignature>& function_set() {
  static const std::vector<OpSignature> set = build_function_set();
  return set;
}

const OpSignature& signature(OpCode code) {
  return function_set()[static_cast<size_t>(code)];
}

int min_tree_size(ValueType type) {
  int best = 1 << 20;
  for (const auto& s : function_set())
    if (s.return_type == type) best = std::min(best, s.min_tree_size);
  return best;
}

Range leaf_range(ValueType type) {
  switch (type) {
    case VT::Color:
    case VT::Float01:
      return {0.0, 1.0};
    case VT::Point:
      return {-1.0, 1.0};
    case VT::FloatPlus:
      return {0.0, 10.0};
    case VT::Angle:
      return {0.0, kTwoPi};
    default:
      throw std::logic_error("leaf_range: not a leaf type");
  }
}

int tree_size(const GenomeNode& node) {
  int n = 1;
  for (const auto& c : node.children) n += tree_size(c);
  return n;
}

bool type_check(const GenomeNode& node) {
  const OpSignature& sig = signature(node.op);
  if (node.children.size() != sig.params.size()) return false;
  if (sig.params.empty()) {
    const Range r = leaf_range(sig.return_type);
    const int components = sig.return_type == VT::Color    ? 3
                           : sig.return_type == VT::Point ? 2
                                                          : 1;
    for (int i = 0; i < components; ++i)
      if (!(node.value[i] >= r.lo && node.value[i] <= r.hi)) return false;
    return true;
  }
  for (size_t i = 0; i < sig.params.size(); ++i) {
    if (node.children[i].type() != sig.params[i]) return false;
    if (!type_check(node.children[i])) return false;
  }
  return true;
}

namespace {

void print_scalar(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void print_node(std::string& out, const GenomeNode& node) {
  const OpSignature& sig = signature(node.op);
  switch (node.op) {
    case OpCode::LeafFloat01:
    case OpCode::LeafFloatPlus:
    case OpCode::LeafAngle:
      print_scalar(out, node.value[0]);
      return;
    case OpCode::LeafColor:
      out += "Color(";
      print_scalar(out, node.value[0]);
      out += ", ";
      print_scalar(out, node.value[1]);
      out += ", ";
      print_scalar(out, node.value[2]);
      out += ")";
      return;
    case OpCode::LeafPoint:
      out += "Vec2(";
      print_scalar(out, node.value[0]);
      out += ", ";
      print_scalar(out, node.value[1]);
      out += ")";
      return;
    default:
      break;
  }
  out += sig.name;
  out += "(";
  for (size_t i = 0; i < node.children.size(); ++i) {
    if (i) out += ", ";
    print_node(out, node.children[i]);
  }
  out += ")";
}

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  GenomeNode parse_value(ValueType expected) {
    skip_ws();
    if (expected == VT::Float01 || expected == VT::FloatPlus ||
        expected == VT::Angle)
      return parse_scalar_leaf(expected);
    const std::string name = parse_identifier();
    if (expected == VT::Color) {
      if (name != "Color") fail("expected Color(...)");
      GenomeNode n;
      n.op = OpCode::LeafColor;
      parse_leaf_args(n, 3);
      return n;
    }
    if (expected == VT::Point) {
      if (name != "Vec2") fail("expected Vec2(...)");
      GenomeNode n;
      n.op = OpCode::LeafPoint;
      parse_leaf_args(n, 2);
      return n;
    }
    // texture operator
    const OpSignature* sig = nullptr;
    for (const auto& cand : function_set())
      if (cand.return_type == VT::Texture && name == cand.name) sig = &cand;
    if (!sig) fail("unknown texture operator '" + name + "'");
    GenomeNode n;
    n.op = sig->code;
    expect('(');
    for (size_t i = 0; i < sig->params.size(); ++i) {
      if (i) expect(',');
      n.children.push_back(parse_value(sig->params[i]));
    }
    expect(')');
    return n;
  }

  void expect_end() {
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
  }

 private:
  GenomeNode parse_scalar_leaf(ValueType t) {
    GenomeNode n;
    n.op = t == VT::Float01     ? OpCode::LeafFloat01
           : t == VT::FloatPlus ? OpCode::LeafFloatPlus
                                : OpCode::LeafAngle;
    n.value[0] = parse_number();
    return n;
  }

  void parse_leaf_args(GenomeNode& n, int count) {
    expect('(');
    for (int i = 0; i < count; ++i) {
      if (i) expect(',');
      n.value[i] = parse_number();
    }
    expect(')');
  }

  double parse_number() {
    skip_ws();
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    pos_ += static_cast<size_t>(end - begin);
    return v;
  }

  std::string parse_identifier() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_]))))
      ++pos_;
    if (start == pos_) fail("expected an identifier");
    return s_.substr(start, pos_ - start);
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error("genome parse error at offset " +
                             std::to_string(pos_) + ": " + msg);
  }

  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace

std::string to_text(const GenomeNode& node) {
  std::string out;
  print_node(out, node);
  return out;
}

std::string to_text(const TextureGenome& g) { return to_text(g.root); }

TextureGenome parse_genome(const std::string& text) {
  Parser p(text);
  TextureGenome g{p.parse_value(ValueType::Texture)};
  p.expect_end();
  if (!type_check(g)) throw std::runtime_error("genome fails type check");
  return g;
}

}  // namespace camo::texsyn
