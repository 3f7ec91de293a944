#include <omp.h>

#include <cmath>
#include <set>

#include "camo/core/rng.hpp"
#include "camo/gp/evolve.hpp"
#include "camo/texsyn/eval.hpp"
#include "camo/texsyn/genome.hpp"
#include "camo/texsyn/render.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace camo;
using texsyn::Color;
using texsyn::GenomeNode;
using texsyn::OpCode;
using texsyn::TextureGenome;

namespace {

GenomeNode scalar_leaf(OpCode op, double v) {
  GenomeNode n;
  n.op = op;
  n.value[0] = v;
  return n;
}

GenomeNode color_leaf(double r, double g, double b) {
  GenomeNode n;
  n.op = OpCode::LeafColor;
  n.value = {r, g, b};
  return n;
}

GenomeNode point_leaf(double x, double y) {
  GenomeNode n;
  n.op = OpCode::LeafPoint;
  n.value = {x, y, 0};
  return n;
}

TextureGenome uniform(double r, double g, double b) {
  GenomeNode n;
  n.op = OpCode::Uniform;
  n.children.push_back(color_leaf(r, g, b));
  return {n};
}

TextureGenome grating(const TextureGenome& a, const TextureGenome& b) {
  GenomeNode n;
  n.op = OpCode::Grating;
  n.children = {point_leaf(0, 0),         a.root, point_leaf(0.1, 0.2),
                b.root,                   scalar_leaf(OpCode::LeafFloat01, 0.3),
                scalar_leaf(OpCode::LeafFloat01, 0.5)};
  return {n};
}

TextureGenome warped_noise() {
  GenomeNode noise;
  noise.op = OpCode::Noise;
  noise.children = {scalar_leaf(OpCode::LeafFloatPlus, 0.3), point_leaf(0.2, -0.4),
                    uniform(0, 0.2, 1).root, uniform(1, 0.8, 0).root};
  GenomeNode warp;
  warp.op = OpCode::Warp;
  warp.children = {scalar_leaf(OpCode::LeafFloatPlus, 0.5),
                   scalar_leaf(OpCode::LeafFloatPlus, 2.0), noise};
  return {warp};
}

}  // namespace

TEST_CASE("uniform texture is constant everywhere") {
  const TextureGenome g = uniform(0.2, 0.5, 0.8);
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const Color c = sample(g, {rng.uniform(-5, 5), rng.uniform(-5, 5)});
    CHECK(c == Color{0.2, 0.5, 0.8});
  }
}

TEST_CASE("grating between a color and itself is that color") {
  const TextureGenome g = grating(uniform(0.3, 0.3, 0.9), uniform(0.3, 0.3, 0.9));
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const Color c = sample(g, {rng.uniform(-2, 2), rng.uniform(-2, 2)});
    CHECK(c.r == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(c.b == doctest::Approx(0.9).epsilon(1e-12));
  }
}

TEST_CASE("warped noise stays in range over a million samples") {
  const TextureGenome g = warped_noise();
  Rng rng(3);
  for (int i = 0; i < 1'000'000; ++i) {
    const Color c = sample(g, {rng.uniform(-3, 3), rng.uniform(-3, 3)});
    REQUIRE(c.r >= 0.0);
    REQUIRE(c.r <= 1.0);
    REQUIRE(c.g >= 0.0);
    REQUIRE(c.g <= 1.0);
    REQUIRE(c.b >= 0.0);
    REQUIRE(c.b <= 1.0);
  }
}

TEST_CASE("sampling random genomes is clamped, pure and bit-identical") {
  Rng tree_rng(101);
  Rng point_rng(202);
  for (int t = 0; t < 1000; ++t) {
    const TextureGenome g = gp::random_tree(texsyn::ValueType::Texture, 60, tree_rng);
    for (int i = 0; i < 1000; ++i) {
      const Vec2 p{point_rng.uniform(-2, 2), point_rng.uniform(-2, 2)};
      const Color a = sample(g, p);
      const Color b = sample(g, p);
      REQUIRE(a == b);  // bit-identical on repeat evaluation
      REQUIRE(a.r >= 0.0);
      REQUIRE(a.r <= 1.0);
      REQUIRE(a.g >= 0.0);
      REQUIRE(a.g <= 1.0);
      REQUIRE(a.b >= 0.0);
      REQUIRE(a.b <= 1.0);
    }
  }
}

TEST_CASE("disk masks match the brute-force distance rule") {
  const TextureGenome g = uniform(1, 1, 1);
  for (int d : {1, 7, 50, 100}) {
    const texsyn::DiskRaster disk = texsyn::render_disk(g, d);
    const double r2 = (d / 2.0) * (d / 2.0);
    int in_mask = 0;
    for (int y = 0; y < d; ++y)
      for (int x = 0; x < d; ++x) {
        const double dx = (x + 0.5) - d / 2.0;
        const double dy = (y + 0.5) - d / 2.0;
        const bool inside = dx * dx + dy * dy <= r2;
        CHECK(disk.in_mask(x, y) == inside);
        in_mask += inside ? 1 : 0;
      }
    if (d == 1) CHECK(in_mask == 1);
  }
}

TEST_CASE("uniform disk renders one color inside the mask") {
  const texsyn::DiskRaster disk = texsyn::render_disk(uniform(0.1, 0.6, 0.9), 100);
  for (int y = 0; y < 100; ++y)
    for (int x = 0; x < 100; ++x)
      if (disk.in_mask(x, y)) {
        REQUIRE(disk.image.at(x, y, 0) == doctest::Approx(0.1f));
        REQUIRE(disk.image.at(x, y, 2) == doctest::Approx(0.9f));
      }
}

TEST_CASE("composition replaces exactly the masked pixels") {
  Image white(512, 512);
  for (size_t i = 0; i < white.value_count(); ++i) white.data()[i] = 1.0f;

  SUBCASE("no disks leaves the background untouched") {
    const Image out = texsyn::compose_tournament(white, 512, {}, 100);
    CHECK(out == white);
  }

  SUBCASE("a black disk removes 3 * mask-count from the pixel sum") {
    const TextureGenome black = uniform(0, 0, 0);
    const Image out = texsyn::compose_tournament(
        white, 512, {{&black, {256.0 + 120.0, 256.0}}}, 100);
    // pixel-count oracle
    int64_t expected_masked = 0;
    for (int y = 0; y < 512; ++y)
      for (int x = 0; x < 512; ++x) {
        const double dx = (x + 0.5) - 376.0;
        const double dy = (y + 0.5) - 256.0;
        if (dx * dx + dy * dy <= 50.0 * 50.0) ++expected_masked;
      }
    double sum = 0;
    for (size_t i = 0; i < out.value_count(); ++i) sum += out.data()[i];
    CHECK(sum == doctest::Approx(512.0 * 512 * 3 - 3.0 * expected_masked));
  }

  SUBCASE("each ground-truth center pixel shows its own genome") {
    const TextureGenome a = uniform(1, 0, 0), b = uniform(0, 1, 0),
                        c = uniform(0, 0, 1);
    const Image out = texsyn::compose_tournament(
        white, 512, {{&a, {100, 100}}, {&b, {400, 120}}, {&c, {250, 400}}},
        100);
    CHECK(out.rgb(100, 100).r == 1.0f);
    CHECK(out.rgb(400, 120).g == 1.0f);
    CHECK(out.rgb(250, 400).b == 1.0f);
  }

  SUBCASE("wrong crop size is rejected") {
    const Image small(128, 128);
    CHECK_THROWS(texsyn::compose_tournament(small, 512, {}, 100));
  }
}

TEST_CASE("downsampling is the block mean") {
  SUBCASE("constant image stays constant") {
    Image img(512, 512);
    for (size_t i = 0; i < img.value_count(); ++i) img.data()[i] = 0.25f;
    const Image out = box_downsample(img, 4);
    CHECK(out.width() == 128);
    CHECK(out.height() == 128);
    for (size_t i = 0; i < out.value_count(); ++i)
      CHECK(out.data()[i] == doctest::Approx(0.25f));
  }

  SUBCASE("2x2 checkerboard averages to one half") {
    Image img(512, 512);
    for (int y = 0; y < 512; ++y)
      for (int x = 0; x < 512; ++x) {
        const float v = ((x / 2 + y / 2) % 2 == 0) ? 0.0f : 1.0f;
        img.set_rgb(x, y, {v, v, v});
      }
    const Image out = box_downsample(img, 4);
    for (size_t i = 0; i < out.value_count(); ++i)
      CHECK(out.data()[i] == doctest::Approx(0.5f));
  }

  SUBCASE("mean is conserved") {
    Rng rng(5);
    Image img(512, 512);
    for (size_t i = 0; i < img.value_count(); ++i)
      img.data()[i] = static_cast<float>(rng.uniform());
    const Image out = box_downsample(img, 4);
    const Rgb before = channel_mean(img);
    const Rgb after = channel_mean(out);
    CHECK(std::abs(before.r - after.r) < 1e-6);
    CHECK(std::abs(before.g - after.g) < 1e-6);
    CHECK(std::abs(before.b - after.b) < 1e-6);
  }

  SUBCASE("wrong dimensions are rejected") {
    CHECK_THROWS(box_downsample(Image(510, 512), 4));
  }
}

TEST_CASE("blitting a cached disk equals drawing it directly") {
  // the simulation blits cached rasters at integer centers; that must be
  // pixel-identical to composing with draw_disk
  Rng rng(555);
  const TextureGenome g = gp::random_tree(texsyn::ValueType::Texture, 60, rng);
  Image direct(512, 512);
  const Vec2 center{137, 402};
  direct = texsyn::compose_tournament(direct, 512, {{&g, center}}, 100);

  Image blitted(512, 512);
  const texsyn::DiskRaster disk = texsyn::render_disk(g, 100);
  texsyn::blit_disk(blitted, disk, static_cast<int>(center.x) - 50,
                    static_cast<int>(center.y) - 50);
  CHECK(direct == blitted);
}

TEST_CASE("rendering is invariant under the thread count") {
  Rng rng(404);
  const TextureGenome g = gp::random_tree(texsyn::ValueType::Texture, 80, rng);
  const int threads_before = omp_get_max_threads();
  omp_set_num_threads(1);
  const texsyn::DiskRaster serial = texsyn::render_disk(g, 100);
  const Image square_serial = texsyn::render_genome_image(g, 64);
  omp_set_num_threads(std::max(2, threads_before));
  const texsyn::DiskRaster threaded = texsyn::render_disk(g, 100);
  const Image square_threaded = texsyn::render_genome_image(g, 64);
  omp_set_num_threads(threads_before);
  CHECK(serial.image == threaded.image);
  CHECK(serial.mask == threaded.mask);
  CHECK(square_serial == square_threaded);
}

TEST_CASE("genome text form round-trips") {
  Rng rng(77);
  for (int t = 0; t < 300; ++t) {
    const TextureGenome g = gp::random_tree(texsyn::ValueType::Texture, 80, rng);
    const std::string text = texsyn::to_text(g);
    const TextureGenome back = texsyn::parse_genome(text);
    REQUIRE(back == g);  // exact: constants print with full precision
  }
  CHECK_THROWS(texsyn::parse_genome("Blend(0.2, Uniform(Color(1,0,0)))"));
  CHECK_THROWS(texsyn::parse_genome("Nope(1)"));
}
