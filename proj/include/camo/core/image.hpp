#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace camo {

struct Rgb {
  float r = 0.0f;
  float g = 0.0f;
  float b = 0.0f;
};

// Row-major interleaved RGB float image. Channel values are nominally in
// [0,1]; encoding to 8-bit clamps.
class Image {
 public:
  Image() = default;
  Image(int width, int height)
      : w_(width),
        h_(height),
        px_(static_cast<size_t>(width) * height * 3, 0.0f) {}

  int width() const { return w_; }
  int height() const { return h_; }
  bool empty() const { return px_.empty(); }

  float* data() { return px_.data(); }
  const float* data() const { return px_.data(); }
  size_t value_count() const { return px_.size(); }

  float& at(int x, int y, int c) { return px_[index(x, y, c)]; }
  float at(int x, int y, int c) const { return px_[index(x, y, c)]; }

  Rgb rgb(int x, int y) const {
    const size_t i = index(x, y, 0);
    return {px_[i], px_[i + 1], px_[i + 2]};
  }
  void set_rgb(int x, int y, Rgb v) {
    const size_t i = index(x, y, 0);
    px_[i] = v.r;
    px_[i + 1] = v.g;
    px_[i + 2] = v.b;
  }

  bool same_size(const Image& o) const { return w_ == o.w_ && h_ == o.h_; }
  bool operator==(const Image&) const = default;

 private:
  size_t index(int x, int y, int c) const {
    assert(x >= 0 && x < w_ && y >= 0 && y < h_ && c >= 0 && c < 3);
    return (static_cast<size_t>(y) * w_ + x) * 3 + c;
  }

  int w_ = 0;
  int h_ = 0;
  std::vector<float> px_;
};

// Bilinear resampling to the given size, edge-clamped.
Image bilinear_resize(const Image& in, int out_w, int out_h);

// Downsampling by unweighted mean over factor x factor blocks. The input
// dimensions must be exact multiples of factor.
Image box_downsample(const Image& in, int factor);

// Axis-aligned crop; the window must lie inside the image.
Image crop(const Image& in, int x0, int y0, int w, int h);

// Per-channel mean over the whole image.
Rgb channel_mean(const Image& in);

// Interleaved HWC image -> planar CHW float tensor (size 3*h*w).
std::vector<float> to_chw(const Image& in);

}  // namespace camo
