#include "camo/core/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace camo {

Image bilinear_resize(const Image& in, int out_w, int out_h) {
  if (in.empty() || out_w < 1 || out_h < 1)
    throw std::invalid_argument("bilinear_resize: bad dimensions");
  Image out(out_w, out_h);
  const double sx = static_cast<double>(in.width()) / out_w;
  const double sy = static_cast<double>(in.height()) / out_h;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      // map the output pixel center into input pixel-center coordinates
      const double fx = (x + 0.5) * sx - 0.5;
      const double fy = (y + 0.5) * sy - 0.5;
      const int x0 = static_cast<int>(std::floor(fx));
      const int y0 = static_cast<int>(std::floor(fy));
      const double tx = fx - x0;
      const double ty = fy - y0;
      const auto cx = [&](int v) { return std::clamp(v, 0, in.width() - 1); };
      const auto cy = [&](int v) { return std::clamp(v, 0, in.height() - 1); };
      for (int c = 0; c < 3; ++c) {
        const double v00 = in.at(cx(x0), cy(y0), c);
        const double v10 = in.at(cx(x0 + 1), cy(y0), c);
        const double v01 = in.at(cx(x0), cy(y0 + 1), c);
        const double v11 = in.at(cx(x0 + 1), cy(y0 + 1), c);
        const double v = (1 - ty) * ((1 - tx) * v00 + tx * v10) +
                         ty * ((1 - tx) * v01 + tx * v11);
        out.at(x, y, c) = static_cast<float>(v);
      }
    }
  }
  return out;
}

Image box_downsample(const Image& in, int factor) {
  if (factor < 1 || in.width() % factor != 0 || in.height() % factor != 0)
    throw std::invalid_argument("box_downsample: size not divisible by factor");
  const int ow = in.width() / factor;
  const int oh = in.height() / factor;
  Image out(ow, oh);
  const double inv = 1.0 / (static_cast<double>(factor) * factor);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc[3] = {0, 0, 0};
      for (int dy = 0; dy < factor; ++dy)
        for (int dx = 0; dx < factor; ++dx)
          for (int c = 0; c < 3; ++c)
            acc[c] += in.at(x * factor + dx, y * factor + dy, c);
      for (int c = 0; c < 3; ++c)
        out.at(x, y, c) = static_cast<float>(acc[c] * inv);
    }
  }
  return out;
}

Image crop(const Image& in, int x0, int y0, int w, int h) {
  if (x0 < 0 || y0 < 0 || w < 1 || h < 1 || x0 + w > in.width() ||
      y0 + h > in.height())
    throw std::invalid_argument("crop: window outside image");
  Image out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      out.set_rgb(x, y, in.rgb(x0 + x, y0 + y));
  return out;
}

Rgb channel_mean(const Image& in) {
  double acc[3] = {0, 0, 0};
  for (int y = 0; y < in.height(); ++y)
    for (int x = 0; x < in.width(); ++x)
      for (int c = 0; c < 3; ++c) acc[c] += in.at(x, y, c);
  const double n = static_cast<double>(in.width()) * in.height();
  return {static_cast<float>(acc[0] / n), static_cast<float>(acc[1] / n),
          static_cast<float>(acc[2] / n)};
}

std::vector<float> to_chw(const Image& in) {
  const int w = in.width();
  const int h = in.height();
  std::vector<float> out(static_cast<size_t>(3) * w * h);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        out[(static_cast<size_t>(c) * h + y) * w + x] = in.at(x, y, c);
  return out;
}

}  // namespace camo
