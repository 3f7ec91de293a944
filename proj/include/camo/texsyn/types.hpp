#pragma once

#include <algorithm>

#include "camo/core/vec2.hpp"

namespace camo::texsyn {

// Working color for texture evaluation. Operators combine unclamped;
// sampling output clamps each channel into [0,1] (and maps non-finite
// values to 0 so pathological operator stacks stay deterministic).
struct Color {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  Color operator+(Color o) const { return {r + o.r, g + o.g, b + o.b}; }
  Color operator*(Color o) const { return {r * o.r, g * o.g, b * o.b}; }
  Color operator*(double s) const { return {r * s, g * s, b * s}; }
  bool operator==(const Color&) const = default;

  double luminance() const { return (r + g + b) / 3.0; }

  Color clamped() const {
    const auto cl = [](double v) {
      if (!(v == v)) return 0.0;  // NaN
      return std::clamp(v, 0.0, 1.0);
    };
    return {cl(r), cl(g), cl(b)};
  }
};

inline Color lerp(Color a, Color b, double t) {
  return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t};
}

}  // namespace camo::texsyn
