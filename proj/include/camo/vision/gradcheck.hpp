#pragma once

#include <cmath>
#include <vector>

#include "camo/core/rng.hpp"
#include "camo/core/vec2.hpp"
#include "camo/vision/net.hpp"

namespace camo::vision {

// Compares analytic gradients against central finite differences on a
// sample of parameters (dropout off). Returns the max over the sample of
//   |analytic - fd| / (|analytic| + eps).
// Meant for small double-precision nets; h defaults to 1e-4.
template <class T>
double gradient_check(Net<T>& net, const T* x, const Vec2* labels, int n,
                      int sample_count, Rng& rng, double h = 1e-4,
                      double eps = 1e-8) {
  net.loss_and_gradients(x, labels, n, nullptr);
  const std::vector<T> analytic = net.grads();

  double worst = 0.0;
  std::vector<T>& params = net.params();
  for (int s = 0; s < sample_count; ++s) {
    const size_t i = static_cast<size_t>(
        rng.uniform_int(0, static_cast<int64_t>(params.size()) - 1));
    const T saved = params[i];
    params[i] = saved + static_cast<T>(h);
    const double up = net.loss_and_gradients(x, labels, n, nullptr);
    params[i] = saved - static_cast<T>(h);
    const double down = net.loss_and_gradients(x, labels, n, nullptr);
    params[i] = saved;
    const double fd = (up - down) / (2.0 * h);
    const double err = std::abs(static_cast<double>(analytic[i]) - fd) /
                       (std::abs(static_cast<double>(analytic[i])) + eps);
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace camo::vision
