#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace camo::vision {

// Architecture of a predator localizer: a stack of square convolutions
// (first stride 1, every later stage stride 2 with doubled filters), each
// followed by ReLU and dropout, then dense layers (ReLU between, sigmoid
// on the final 2-wide output, dropout after the first dense layer only).
struct ConvNetSpec {
  int input_edge = 128;
  int input_channels = 3;
  int base_filters = 16;
  int conv_stages = 5;
  int kernel = 5;
  std::vector<int> dense_widths = {128, 32, 8, 2};
  double dropout_rate = 0.2;
  // test hook: identity activations everywhere; finite differences are
  // exact on the resulting purely linear net
  bool linear_activations = false;

  std::vector<int> filters() const;  // {16, 32, 64, 128, 256} by default
  // throws std::invalid_argument when the architecture laws are violated
  void validate() const;
  bool operator==(const ConvNetSpec&) const = default;
};

// desk-scale variant used by tests: 64^2 input, 8 base filters
ConvNetSpec reduced_spec(int input_edge = 64, int base_filters = 8);

struct LayerSummary {
  std::string name;
  std::string output_shape;  // e.g. "128x128x16" or "128"
  int64_t param_count;
};

// Per-layer breakdown of the trainable parameter count, matching a
// sequential Conv/Dense model summary of this architecture.
std::vector<LayerSummary> layer_summary(const ConvNetSpec& spec);
int64_t param_count(const ConvNetSpec& spec);

}  // namespace camo::vision
