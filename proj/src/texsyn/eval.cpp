#include "camo/texsyn/eval.hpp"

#include <algorithm>
#include <cmath>

#include "camo/texsyn/noise.hpp"

namespace camo::texsyn {
namespace {

constexpr double kMinScale = 1e-3;      // guards Scale/Noise degeneracy
constexpr uint32_t kWarpSaltX = 0x517cc1b7u;
constexpr uint32_t kWarpSaltY = 0x27220a95u;
constexpr uint32_t kColorSaltR = 0x9E3779B9u;
constexpr uint32_t kColorSaltG = 0x85EBCA6Bu;
constexpr uint32_t kColorSaltB = 0xC2B2AE35u;
constexpr uint32_t kSpotsSalt = 0x165667B1u;

double smoothstep(double edge0, double edge1, double x) {
  if (edge0 >= edge1) return x < edge0 ? 0.0 : 1.0;  // hard edge
  const double t = std::clamp((x - edge0) / (edge1 - edge0), 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

Color eval(const GenomeNode& n, Vec2 p);

Vec2 point_of(const GenomeNode& n) { return {n.value[0], n.value[1]}; }
double scalar_of(const GenomeNode& n) { return n.value[0]; }

// soft square wave in phase [0,1): 1 inside the duty band, 0 outside,
// with smooth transitions whose width is softness * the narrower band
double grating_profile(double phase, double duty, double softness) {
  const double width = 0.5 * softness * std::min(duty, 1.0 - duty);
  if (width <= 0.0) return phase < duty ? 1.0 : 0.0;
  // distance into the band from its nearest edge (band is [0, duty))
  const double rise = smoothstep(-width, width, phase);
  const double fall = smoothstep(duty - width, duty + width, phase);
  const double tail = smoothstep(1.0 - width, 1.0 + width, phase);
  return rise - fall + tail;
}

Color eval_spot(const GenomeNode& n, Vec2 p) {
  const Vec2 center = point_of(n.children[0]);
  const double radius = scalar_of(n.children[1]);
  const double softness = scalar_of(n.children[2]);
  const double d = distance(p, center);
  const double inner = radius * (1.0 - softness);
  const double w = 1.0 - smoothstep(inner, radius, d);
  if (w <= 0.0) return eval(n.children[4], p);
  if (w >= 1.0) return eval(n.children[3], p);
  return lerp(eval(n.children[4], p), eval(n.children[3], p), w);
}

Color eval_grating(const GenomeNode& n, Vec2 p) {
  const Vec2 p0 = point_of(n.children[0]);
  const Vec2 p1 = point_of(n.children[2]);
  const Vec2 v = p1 - p0;
  const double len2 = v.dot(v);
  if (len2 < 1e-12) return eval(n.children[1], p);  // degenerate stripe
  const double softness = scalar_of(n.children[4]);
  const double duty = scalar_of(n.children[5]);
  double phase = (p - p0).dot(v) / len2;
  phase -= std::floor(phase);
  const double w = grating_profile(phase, duty, softness);
  if (w <= 0.0) return eval(n.children[3], p);
  if (w >= 1.0) return eval(n.children[1], p);
  return lerp(eval(n.children[3], p), eval(n.children[1], p), w);
}

// Hash-jittered spot field: every grid cell of the tiling holds at most
// one spot, fully inside its cell, so a point only consults its own cell.
Color eval_lots_of_spots(const GenomeNode& n, Vec2 p) {
  const double density = scalar_of(n.children[0]);
  double r_lo = scalar_of(n.children[1]);
  double r_hi = scalar_of(n.children[2]);
  if (r_lo > r_hi) std::swap(r_lo, r_hi);
  r_lo = std::max(r_lo, 1e-3);
  r_hi = std::max(r_hi, r_lo);
  const double softness = scalar_of(n.children[3]);
  const double margin = scalar_of(n.children[4]);
  const double cell = 2.0 * r_hi + margin;

  const double cxf = std::floor(p.x / cell);
  const double cyf = std::floor(p.y / cell);
  const int64_t ix = static_cast<int64_t>(cxf);
  const int64_t iy = static_cast<int64_t>(cyf);

  const auto background = [&] { return eval(n.children[6], p); };
  if (cell_hash01(ix, iy, kSpotsSalt) >= density) return background();

  const double r =
      r_lo + (r_hi - r_lo) * cell_hash01(ix, iy, kSpotsSalt + 1);
  const double jitter = cell - 2.0 * r;
  const Vec2 center{cxf * cell + r + jitter * cell_hash01(ix, iy, kSpotsSalt + 2),
                    cyf * cell + r + jitter * cell_hash01(ix, iy, kSpotsSalt + 3)};
  const double d = distance(p, center);
  const double w = 1.0 - smoothstep(r * (1.0 - softness), r, d);
  if (w <= 0.0) return background();
  if (w >= 1.0) return eval(n.children[5], p);
  return lerp(background(), eval(n.children[5], p), w);
}

Color eval(const GenomeNode& n, Vec2 p) {
  switch (n.op) {
    case OpCode::Uniform: {
      const GenomeNode& c = n.children[0];
      return {c.value[0], c.value[1], c.value[2]};
    }
    case OpCode::Spot:
      return eval_spot(n, p);
    case OpCode::Grating:
      return eval_grating(n, p);
    case OpCode::LotsOfSpots:
      return eval_lots_of_spots(n, p);
    case OpCode::Noise: {
      const double scale = std::max(scalar_of(n.children[0]), kMinScale);
      const Vec2 offset = point_of(n.children[1]);
      const double t =
          gradient_noise_01((p + offset) * (1.0 / scale));
      return lerp(eval(n.children[2], p), eval(n.children[3], p), t);
    }
    case OpCode::ColorNoise: {
      const double scale = std::max(scalar_of(n.children[0]), kMinScale);
      const Vec2 q = (p + point_of(n.children[1])) * (1.0 / scale);
      return {gradient_noise_01(q, kColorSaltR),
              gradient_noise_01(q, kColorSaltG),
              gradient_noise_01(q, kColorSaltB)};
    }
    case OpCode::Blend:
      return lerp(eval(n.children[1], p), eval(n.children[2], p),
                  scalar_of(n.children[0]));
    case OpCode::SoftMatte: {
      const double m = clamp01(eval(n.children[0], p).luminance());
      if (m <= 0.0) return eval(n.children[1], p);
      if (m >= 1.0) return eval(n.children[2], p);
      return lerp(eval(n.children[1], p), eval(n.children[2], p), m);
    }
    case OpCode::Add:
      return eval(n.children[0], p) + eval(n.children[1], p);
    case OpCode::Multiply:
      return eval(n.children[0], p) * eval(n.children[1], p);
    case OpCode::Scale: {
      const double s = std::max(scalar_of(n.children[0]), kMinScale);
      return eval(n.children[1], p * (1.0 / s));
    }
    case OpCode::Rotate: {
      // rotate about the disk center (0.5, 0.5)
      const Vec2 c{0.5, 0.5};
      const Vec2 q = (p - c).rotated(-scalar_of(n.children[0])) + c;
      return eval(n.children[1], q);
    }
    case OpCode::Translate:
      return eval(n.children[1], p - point_of(n.children[0]));
    case OpCode::Warp: {
      const double scale = std::max(scalar_of(n.children[0]), kMinScale);
      const double amplitude = scalar_of(n.children[1]);
      const Vec2 q = p * (1.0 / scale);
      const Vec2 shift{amplitude * gradient_noise(q, kWarpSaltX),
                       amplitude * gradient_noise(q, kWarpSaltY)};
      return eval(n.children[2], p + shift);
    }
    default:
      // a bare leaf cannot be sampled as a texture; construction rejects
      // such trees, so this is unreachable for type-correct genomes
      return {};
  }
}

}  // namespace

Color sample(const TextureGenome& genome, Vec2 p) {
  return eval(genome.root, p).clamped();
}

}  // namespace camo::texsyn
