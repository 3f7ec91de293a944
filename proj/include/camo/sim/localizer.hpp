#pragma once

#include <stdexcept>
#include <vector>

#include "camo/core/vec2.hpp"
#include "camo/vision/net.hpp"

namespace camo::sim {

// Anything that looks at a net-input-sized CHW image and answers with a
// normalized location. Lets the static quality metric and tests swap the
// standard net for seeded stubs.
class Localizer {
 public:
  virtual ~Localizer() = default;
  virtual Vec2 predict_norm(const std::vector<float>& chw) = 0;
};

class NetLocalizer : public Localizer {
 public:
  explicit NetLocalizer(const vision::Net<float>& net) : net_(&net) {}
  Vec2 predict_norm(const std::vector<float>& chw) override {
    if (chw.size() != net_->input_size())
      throw std::invalid_argument("NetLocalizer: image shape mismatch");
    return net_->predict(chw.data());
  }

 private:
  const vision::Net<float>* net_;
};

}  // namespace camo::sim
