#include "camo/sim/annotate.hpp"

#include <cmath>
#include <numbers>

namespace camo::sim {
namespace {

constexpr double kRingRadius = 14.0;
constexpr double kRingWidth = 2.5;
constexpr double kArmInner = 5.0;
constexpr double kArmOuter = 22.0;
constexpr double kArmHalfWidth = 1.2;
constexpr double kDashLength = 5.0;

void put(Image& img, int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= img.width() || y >= img.height()) return;
  img.set_rgb(x, y, c);
}

}  // namespace

void draw_crosshair(Image& img, Vec2 center, Rgb primary, Rgb secondary) {
  const int reach = static_cast<int>(std::ceil(kArmOuter + kRingWidth));
  const int x_lo = static_cast<int>(std::floor(center.x)) - reach;
  const int y_lo = static_cast<int>(std::floor(center.y)) - reach;
  for (int y = y_lo; y <= y_lo + 2 * reach + 1; ++y)
    for (int x = x_lo; x <= x_lo + 2 * reach + 1; ++x) {
      const double dx = (x + 0.5) - center.x;
      const double dy = (y + 0.5) - center.y;
      const double d = std::sqrt(dx * dx + dy * dy);

      // ring, dashed by arc length
      if (std::abs(d - kRingRadius) <= kRingWidth / 2) {
        const double arc = (std::atan2(dy, dx) + std::numbers::pi) * kRingRadius;
        const bool alt = static_cast<int>(arc / kDashLength) % 2 != 0;
        put(img, x, y, alt ? secondary : primary);
        continue;
      }
      // four arms, dashed by distance from center
      const bool on_h = std::abs(dy) <= kArmHalfWidth && std::abs(dx) >= kArmInner &&
                        std::abs(dx) <= kArmOuter;
      const bool on_v = std::abs(dx) <= kArmHalfWidth && std::abs(dy) >= kArmInner &&
                        std::abs(dy) <= kArmOuter;
      if (on_h || on_v) {
        const bool alt = static_cast<int>(d / kDashLength) % 2 != 0;
        put(img, x, y, alt ? secondary : primary);
      }
    }
}

Image annotate_tournament(const TournamentRecord& record) {
  Image out = record.composite;
  const Rgb black{0, 0, 0}, white{1, 1, 1}, green{0, 1, 0}, red{1, 0, 0};
  // ranks drawn worst-first so the best marker stays on top where they
  // overlap
  draw_crosshair(out, record.predictions[2], red, black);
  draw_crosshair(out, record.predictions[1], green, black);
  draw_crosshair(out, record.predictions[0], black, white);
  return out;
}

}  // namespace camo::sim
