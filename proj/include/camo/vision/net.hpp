#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "camo/core/kernels.hpp"
#include "camo/core/rng.hpp"
#include "camo/core/vec2.hpp"
#include "camo/vision/spec.hpp"

namespace camo::vision {

// training loss: mean squared error over the two coordinates
inline double mse_loss(Vec2 prediction, Vec2 label) {
  const double dx = prediction.x - label.x;
  const double dy = prediction.y - label.y;
  return (dx * dx + dy * dy) / 2.0;
}

// A predator localizer: image in, predicted location in [0,1]^2 out.
// Templated on the scalar so the production nets run in float while
// gradient checking runs the identical code in double.
template <class T>
class Net {
 public:
  struct NamedArray {
    std::string name;
    std::vector<int> shape;
    size_t offset;  // into the flat parameter vector
    size_t size;
  };

  explicit Net(ConvNetSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    build_plan();
    params_.assign(total_params_, T(0));
    grads_.assign(total_params_, T(0));
    adam_m_.assign(total_params_, T(0));
    adam_v_.assign(total_params_, T(0));
  }

  const ConvNetSpec& spec() const { return spec_; }
  size_t param_count() const { return total_params_; }
  const std::vector<NamedArray>& arrays() const { return arrays_; }

  std::vector<T>& params() { return params_; }
  const std::vector<T>& params() const { return params_; }
  const std::vector<T>& grads() const { return grads_; }

  // fan-in scaled uniform init, zero biases
  void init_weights(Rng& rng) {
    for (const auto& c : conv_) {
      const double a = std::sqrt(6.0 / (static_cast<double>(c.dims.in_c) *
                                        c.dims.kernel * c.dims.kernel));
      for (size_t i = 0; i < c.w_size; ++i)
        params_[c.w_off + i] = static_cast<T>(rng.uniform(-a, a));
      std::fill_n(params_.begin() + c.b_off, c.b_size, T(0));
    }
    for (const auto& d : dense_) {
      const double a = std::sqrt(6.0 / d.in_dim);
      for (size_t i = 0; i < d.w_size; ++i)
        params_[d.w_off + i] = static_cast<T>(rng.uniform(-a, a));
      std::fill_n(params_.begin() + d.b_off, d.b_size, T(0));
    }
  }

  // adds independent uniform noise in (-magnitude, magnitude) to every
  // parameter
  void perturb(double magnitude, Rng& rng) {
    for (auto& p : params_)
      p += static_cast<T>(rng.uniform(-magnitude, magnitude));
  }

  size_t input_size() const {
    return static_cast<size_t>(spec_.input_channels) * spec_.input_edge *
           spec_.input_edge;
  }

  // batch forward with dropout off; out holds n (x, y) pairs
  void forward(const T* x, int n, T* out) const {
    Workspace ws;
    const_cast<Net*>(this)->run_forward(x, n, nullptr, ws);
    std::copy_n(ws.acts.back().data(), static_cast<size_t>(n) * 2, out);
  }

  Vec2 predict(const T* image_chw) const {
    T out[2];
    forward(image_chw, 1, out);
    return {std::clamp(static_cast<double>(out[0]), 0.0, 1.0),
            std::clamp(static_cast<double>(out[1]), 0.0, 1.0)};
  }

  // mean squared error over the two coordinates, averaged over the batch;
  // gradients land in grads(). dropout_rng == nullptr disables dropout.
  T loss_and_gradients(const T* x, const Vec2* labels, int n,
                       Rng* dropout_rng) {
    run_forward(x, n, dropout_rng, ws_);
    return run_backward(x, labels, n, ws_);
  }

  // one Adam update on the minibatch loss; returns that loss
  T train_step(const T* x, const Vec2* labels, int n, double lr,
               Rng& dropout_rng) {
    const T loss = loss_and_gradients(x, labels, n, &dropout_rng);
    if (lr == 0.0) return loss;
    ++adam_t_;
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(adam_t_));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(adam_t_));
    const double step = lr / bc1;
    T* p = params_.data();
    T* g = grads_.data();
    T* m = adam_m_.data();
    T* v = adam_v_.data();
    const int64_t count = static_cast<int64_t>(total_params_);
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < count; ++i) {
      m[i] = static_cast<T>(b1 * m[i] + (1.0 - b1) * g[i]);
      v[i] = static_cast<T>(b2 * v[i] + (1.0 - b2) * g[i] * g[i]);
      const double vhat = v[i] / bc2;
      p[i] -= static_cast<T>(step * m[i] / (std::sqrt(vhat) + eps));
    }
    return loss;
  }

  int64_t adam_steps() const { return adam_t_; }

 private:
  struct ConvLayer {
    kernels::ConvDims dims;
    size_t w_off, w_size, b_off, b_size;
    size_t out_size;  // per example
  };
  struct DenseLayer {
    int in_dim, out_dim;
    size_t w_off, w_size, b_off, b_size;
  };
  struct Workspace {
    // acts[0] is the input copy; then one entry per conv stage (post
    // ReLU/dropout) and per dense layer (post activation/dropout)
    std::vector<std::vector<T>> acts;
    std::vector<std::vector<uint8_t>> masks;  // parallel to acts, may be empty
    std::vector<T> scratch_a, scratch_b;
    int batch = -1;
  };

  void build_plan() {
    size_t off = 0;
    const auto push = [&off](size_t n) {
      const size_t at = off;
      off += n;
      return at;
    };
    int edge = spec_.input_edge;
    int in_c = spec_.input_channels;
    const auto filters = spec_.filters();
    for (int i = 0; i < spec_.conv_stages; ++i) {
      ConvLayer c{};
      const int stride = i == 0 ? 1 : 2;
      c.dims = kernels::make_conv_dims(in_c, edge, edge, filters[i],
                                       spec_.kernel, stride);
      c.w_size = static_cast<size_t>(filters[i]) * in_c * spec_.kernel *
                 spec_.kernel;
      c.b_size = static_cast<size_t>(filters[i]);
      c.w_off = push(c.w_size);
      c.b_off = push(c.b_size);
      c.out_size = static_cast<size_t>(filters[i]) * c.dims.out_h * c.dims.out_w;
      conv_.push_back(c);
      arrays_.push_back({"conv" + std::to_string(i) + "/w",
                         {filters[i], in_c, spec_.kernel, spec_.kernel},
                         c.w_off,
                         c.w_size});
      arrays_.push_back(
          {"conv" + std::to_string(i) + "/b", {filters[i]}, c.b_off, c.b_size});
      edge = c.dims.out_h;
      in_c = filters[i];
    }
    int width = edge * edge * in_c;
    for (size_t i = 0; i < spec_.dense_widths.size(); ++i) {
      DenseLayer d{};
      d.in_dim = width;
      d.out_dim = spec_.dense_widths[i];
      d.w_size = static_cast<size_t>(d.out_dim) * d.in_dim;
      d.b_size = static_cast<size_t>(d.out_dim);
      d.w_off = push(d.w_size);
      d.b_off = push(d.b_size);
      dense_.push_back(d);
      arrays_.push_back({"dense" + std::to_string(i) + "/w",
                         {d.out_dim, d.in_dim},
                         d.w_off,
                         d.w_size});
      arrays_.push_back(
          {"dense" + std::to_string(i) + "/b", {d.out_dim}, d.b_off, d.b_size});
      width = d.out_dim;
    }
    total_params_ = off;
    assert(total_params_ ==
           static_cast<size_t>(vision::param_count(spec_)));
  }

  static void relu_inplace(T* a, size_t n) {
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < static_cast<int64_t>(n); ++i)
      if (a[i] < T(0)) a[i] = T(0);
  }

  // inverted dropout; mask holds keep flags. The mask is drawn serially
  // so results do not depend on thread count.
  void dropout_inplace(T* a, size_t n, std::vector<uint8_t>& mask, Rng& rng) {
    mask.resize(n);
    const double rate = spec_.dropout_rate;
    for (size_t i = 0; i < n; ++i)
      mask[i] = rng.uniform() >= rate ? 1 : 0;
    const T scale = static_cast<T>(1.0 / (1.0 - rate));
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < static_cast<int64_t>(n); ++i)
      a[i] = mask[i] ? a[i] * scale : T(0);
  }

  void run_forward(const T* x, int n, Rng* dropout_rng, Workspace& ws) {
    if (n < 1) throw std::invalid_argument("Net: empty batch");
    const size_t stages = conv_.size() + dense_.size();
    ws.acts.resize(stages + 1);
    ws.masks.resize(stages + 1);
    ws.batch = n;

    ws.acts[0].assign(x, x + static_cast<size_t>(n) * input_size());
    size_t li = 1;
    for (size_t i = 0; i < conv_.size(); ++i, ++li) {
      const ConvLayer& c = conv_[i];
      ws.acts[li].resize(static_cast<size_t>(n) * c.out_size);
      kernels::conv2d_forward(ws.acts[li - 1].data(), params_.data() + c.w_off,
                              params_.data() + c.b_off, ws.acts[li].data(), n,
                              c.dims);
      if (!spec_.linear_activations)
        relu_inplace(ws.acts[li].data(), ws.acts[li].size());
      if (dropout_rng)
        dropout_inplace(ws.acts[li].data(), ws.acts[li].size(), ws.masks[li],
                        *dropout_rng);
      else
        ws.masks[li].clear();
    }
    for (size_t i = 0; i < dense_.size(); ++i, ++li) {
      const DenseLayer& d = dense_[i];
      ws.acts[li].resize(static_cast<size_t>(n) * d.out_dim);
      kernels::dense_forward(ws.acts[li - 1].data(), params_.data() + d.w_off,
                             params_.data() + d.b_off, ws.acts[li].data(), n,
                             d.in_dim, d.out_dim);
      const bool last = i + 1 == dense_.size();
      if (last) {
        if (!spec_.linear_activations) {
          T* a = ws.acts[li].data();
          const int64_t count = static_cast<int64_t>(ws.acts[li].size());
          for (int64_t j = 0; j < count; ++j)
            a[j] = T(1) / (T(1) + std::exp(-a[j]));
        }
      } else {
        if (!spec_.linear_activations)
          relu_inplace(ws.acts[li].data(), ws.acts[li].size());
        if (i == 0 && dropout_rng)
          dropout_inplace(ws.acts[li].data(), ws.acts[li].size(), ws.masks[li],
                          *dropout_rng);
        else
          ws.masks[li].clear();
      }
    }
  }

  T run_backward(const T* x, const Vec2* labels, int n, Workspace& ws) {
    std::fill(grads_.begin(), grads_.end(), T(0));
    const size_t stages = conv_.size() + dense_.size();

    // loss and output-layer delta: L = mean over batch of |p - y|^2 / 2
    const std::vector<T>& pred = ws.acts[stages];
    double loss_acc = 0;
    std::vector<T>& delta = ws.scratch_a;
    delta.resize(static_cast<size_t>(n) * 2);
    for (int e = 0; e < n; ++e) {
      const double px = pred[e * 2 + 0], py = pred[e * 2 + 1];
      const double ex = px - labels[e].x, ey = py - labels[e].y;
      loss_acc += (ex * ex + ey * ey) / 2.0;
      // through the MSE and the output sigmoid
      const double sx = spec_.linear_activations ? 1.0 : px * (1.0 - px);
      const double sy = spec_.linear_activations ? 1.0 : py * (1.0 - py);
      delta[e * 2 + 0] = static_cast<T>(ex / n * sx);
      delta[e * 2 + 1] = static_cast<T>(ey / n * sy);
    }
    const T loss = static_cast<T>(loss_acc / n);
    if (!std::isfinite(static_cast<double>(loss)))
      throw std::runtime_error("training diverged: non-finite loss");

    std::vector<T>& next = ws.scratch_b;
    size_t li = stages;
    for (size_t i = dense_.size(); i-- > 0; --li) {
      const DenseLayer& d = dense_[i];
      const std::vector<T>& input = ws.acts[li - 1];
      kernels::dense_backward_params(input.data(), delta.data(),
                                     grads_.data() + d.w_off,
                                     grads_.data() + d.b_off, n, d.in_dim,
                                     d.out_dim);
      next.resize(static_cast<size_t>(n) * d.in_dim);
      kernels::dense_backward_input(delta.data(), params_.data() + d.w_off,
                                    next.data(), n, d.in_dim, d.out_dim);
      if (li - 1 > 0) apply_activation_grad(next, ws, li - 1);
      std::swap(delta, next);
    }
    for (size_t i = conv_.size(); i-- > 0; --li) {
      const ConvLayer& c = conv_[i];
      const std::vector<T>& input = ws.acts[li - 1];
      kernels::conv2d_backward_params(input.data(), delta.data(),
                                      grads_.data() + c.w_off,
                                      grads_.data() + c.b_off, n, c.dims);
      if (li - 1 == 0) break;  // no gradient w.r.t. the image needed
      next.resize(static_cast<size_t>(n) * c.dims.in_c * c.dims.in_h *
                  c.dims.in_w);
      kernels::conv2d_backward_input(delta.data(), params_.data() + c.w_off,
                                     next.data(), n, c.dims);
      apply_activation_grad(next, ws, li - 1);
      std::swap(delta, next);
    }
    return loss;
  }

  // folds the ReLU derivative and the dropout mask of layer `li` into the
  // incoming gradient. Post-activation values identify the ReLU sign;
  // dropped positions are zeroed by the mask.
  void apply_activation_grad(std::vector<T>& grad, const Workspace& ws,
                             size_t li) {
    const std::vector<T>& act = ws.acts[li];
    const std::vector<uint8_t>& mask = ws.masks[li];
    const T scale = static_cast<T>(1.0 / (1.0 - spec_.dropout_rate));
    const int64_t count = static_cast<int64_t>(grad.size());
    const bool relu = !spec_.linear_activations;
    if (!mask.empty()) {
#pragma omp parallel for schedule(static)
      for (int64_t i = 0; i < count; ++i)
        grad[i] = (mask[i] && (!relu || act[i] > T(0))) ? grad[i] * scale : T(0);
    } else if (relu) {
#pragma omp parallel for schedule(static)
      for (int64_t i = 0; i < count; ++i)
        if (act[i] <= T(0)) grad[i] = T(0);
    }
  }

  ConvNetSpec spec_;
  std::vector<ConvLayer> conv_;
  std::vector<DenseLayer> dense_;
  std::vector<NamedArray> arrays_;
  size_t total_params_ = 0;
  std::vector<T> params_, grads_, adam_m_, adam_v_;
  int64_t adam_t_ = 0;
  Workspace ws_;
};

using NetF = Net<float>;

}  // namespace camo::vision
