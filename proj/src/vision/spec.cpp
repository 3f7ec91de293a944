#include "camo/vision/spec.hpp"

#include <stdexcept>

namespace camo::vision {

std::vector<int> ConvNetSpec::filters() const {
  std::vector<int> f;
  int count = base_filters;
  for (int i = 0; i < conv_stages; ++i) {
    f.push_back(count);
    count *= 2;
  }
  return f;
}

void ConvNetSpec::validate() const {
  if (input_edge < 1 || input_channels < 1 || base_filters < 1 || kernel < 1)
    throw std::invalid_argument("ConvNetSpec: nonpositive dimension");
  if (conv_stages < 1)
    throw std::invalid_argument("ConvNetSpec: need at least one conv stage");
  if (dense_widths.empty() || dense_widths.back() != 2)
    throw std::invalid_argument("ConvNetSpec: last dense layer must be 2-wide");
  if (dropout_rate < 0.0 || dropout_rate >= 1.0)
    throw std::invalid_argument("ConvNetSpec: dropout rate out of range");
  // stride-2 stages halve the map; the input must survive all of them
  int edge = input_edge;
  for (int i = 1; i < conv_stages; ++i) {
    if (edge % 2 != 0)
      throw std::invalid_argument("ConvNetSpec: input edge not divisible");
    edge /= 2;
  }
}

ConvNetSpec reduced_spec(int input_edge, int base_filters) {
  ConvNetSpec s;
  s.input_edge = input_edge;
  s.base_filters = base_filters;
  return s;
}

std::vector<LayerSummary> layer_summary(const ConvNetSpec& spec) {
  spec.validate();
  std::vector<LayerSummary> layers;
  int edge = spec.input_edge;
  int in_c = spec.input_channels;
  const auto f = spec.filters();
  for (int i = 0; i < spec.conv_stages; ++i) {
    if (i > 0) edge /= 2;  // stride 2 with 'same' padding
    const int64_t params =
        static_cast<int64_t>(spec.kernel) * spec.kernel * in_c * f[i] + f[i];
    layers.push_back({"conv2d_" + std::to_string(i),
                      std::to_string(edge) + "x" + std::to_string(edge) + "x" +
                          std::to_string(f[i]),
                      params});
    in_c = f[i];
  }
  int64_t width = static_cast<int64_t>(edge) * edge * in_c;
  layers.push_back({"flatten", std::to_string(width), 0});
  for (size_t i = 0; i < spec.dense_widths.size(); ++i) {
    const int64_t out = spec.dense_widths[i];
    layers.push_back({"dense_" + std::to_string(i), std::to_string(out),
                      width * out + out});
    width = out;
  }
  return layers;
}

int64_t param_count(const ConvNetSpec& spec) {
  int64_t total = 0;
  for (const auto& l : layer_summary(spec)) total += l.param_count;
  return total;
}

}  // namespace camo::vision
