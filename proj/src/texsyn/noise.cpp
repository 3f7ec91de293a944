#include "camo/texsyn/noise.hpp"

#include <algorithm>
#include <cmath>

namespace camo::texsyn {
namespace {

// Ken Perlin's reference permutation table (public domain).
constexpr int kPerm[256] = {
    151, 160, 137, 91,  90,  15,  131, 13,  201, 95,  96,  53,  194, 233, 7,
    225, 140, 36,  103, 30,  69,  142, 8,   99,  37,  240, 21,  10,  23,  190,
    6,   148, 247, 120, 234, 75,  0,   26,  197, 62,  94,  252, 219, 203, 117,
    35,  11,  32,  57,  177, 33,  88,  237, 149, 56,  87,  174, 20,  125, 136,
    171, 168, 68,  175, 74,  165, 71,  134, 139, 48,  27,  166, 77,  146, 158,
    231, 83,  111, 229, 122, 60,  211, 133, 230, 220, 105, 92,  41,  55,  46,
    245, 40,  244, 102, 143, 54,  65,  25,  63,  161, 1,   216, 80,  73,  209,
    76,  132, 187, 208, 89,  18,  169, 200, 196, 135, 130, 116, 188, 159, 86,
    164, 100, 109, 198, 173, 186, 3,   64,  52,  217, 226, 250, 124, 123, 5,
    202, 38,  147, 118, 126, 255, 82,  85,  212, 207, 206, 59,  227, 47,  16,
    58,  17,  182, 189, 28,  42,  223, 183, 170, 213, 119, 248, 152, 2,   44,
    154, 163, 70,  221, 153, 101, 155, 167, 43,  172, 9,   129, 22,  39,  253,
    19,  98,  108, 110, 79,  113, 224, 232, 178, 185, 112, 104, 218, 246, 97,
    228, 251, 34,  242, 193, 238, 210, 144, 12,  191, 179, 162, 241, 81,  51,
    145, 235, 249, 14,  239, 107, 49,  192, 214, 31,  181, 199, 106, 157, 184,
    84,  204, 176, 115, 121, 50,  45,  127, 4,   150, 254, 138, 236, 205, 93,
    222, 114, 67,  29,  24,  72,  243, 141, 128, 195, 78,  66,  215, 61,  156,
    180};

uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

int hashed(int64_t ix, int64_t iy, uint32_t salt) {
  const uint64_t h = mix64(static_cast<uint64_t>(ix) * 0x9e3779b185ebca87ull ^
                           static_cast<uint64_t>(iy) * 0xc2b2ae3d27d4eb4full ^
                           (static_cast<uint64_t>(salt) << 32));
  return kPerm[h & 255];
}

// eight unit-ish gradients; kept short so the noise stays in [-1,1]
double grad_dot(int h, double dx, double dy) {
  switch (h & 7) {
    case 0: return dx;
    case 1: return -dx;
    case 2: return dy;
    case 3: return -dy;
    case 4: return 0.70710678118654752 * (dx + dy);
    case 5: return 0.70710678118654752 * (dx - dy);
    case 6: return 0.70710678118654752 * (-dx + dy);
    default: return 0.70710678118654752 * (-dx - dy);
  }
}

double fade(double t) { return t * t * t * (t * (t * 6 - 15) + 10); }

}  // namespace

double gradient_noise(Vec2 p, uint32_t salt) {
  const double fx = std::floor(p.x);
  const double fy = std::floor(p.y);
  const int64_t ix = static_cast<int64_t>(fx);
  const int64_t iy = static_cast<int64_t>(fy);
  const double dx = p.x - fx;
  const double dy = p.y - fy;

  const double n00 = grad_dot(hashed(ix, iy, salt), dx, dy);
  const double n10 = grad_dot(hashed(ix + 1, iy, salt), dx - 1, dy);
  const double n01 = grad_dot(hashed(ix, iy + 1, salt), dx, dy - 1);
  const double n11 = grad_dot(hashed(ix + 1, iy + 1, salt), dx - 1, dy - 1);

  const double u = fade(dx);
  const double v = fade(dy);
  const double nx0 = n00 + u * (n10 - n00);
  const double nx1 = n01 + u * (n11 - n01);
  return nx0 + v * (nx1 - nx0);
}

double gradient_noise_01(Vec2 p, uint32_t salt) {
  // lattice noise with these gradients stays within +-sqrt(1/2)
  const double n = gradient_noise(p, salt) * 0.70710678118654752 * 2.0;
  return std::clamp(0.5 + 0.5 * n, 0.0, 1.0);
}

double cell_hash01(int64_t ix, int64_t iy, uint32_t salt) {
  const uint64_t h = mix64(static_cast<uint64_t>(ix) * 0x9e3779b185ebca87ull ^
                           static_cast<uint64_t>(iy) * 0xc2b2ae3d27d4eb4full ^
                           (static_cast<uint64_t>(salt) * 0xd6e8feb86659fd93ull));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace camo::texsyn
