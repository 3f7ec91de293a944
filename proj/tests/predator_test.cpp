#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "camo/core/image_io.hpp"
#include "camo/core/rng.hpp"
#include "camo/gp/evolve.hpp"
#include "camo/predator/agent.hpp"
#include "camo/predator/augment.hpp"
#include "camo/predator/fcd.hpp"
#include "camo/predator/pretrain.hpp"
#include "camo/texsyn/render.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace camo;
using predator::FcdExample;
using predator::FcdParams;
using predator::PredatorAgent;
using predator::TrainExample;

namespace {

vision::ConvNetSpec tiny_spec() {
  vision::ConvNetSpec s;
  s.input_edge = 16;
  s.base_filters = 4;
  s.conv_stages = 2;
  s.kernel = 3;
  s.dense_widths = {16, 2};
  return s;
}

FcdParams small_fcd() {
  FcdParams p;
  p.image_edge = 64;
  p.genome_max_size = 40;
  return p;
}

// mean |pixel - background| over the disk at `center`
double disk_contrast(const Image& img, const Image& background, Vec2 center,
                     double diameter) {
  const double r2 = (diameter / 2) * (diameter / 2);
  double acc = 0;
  int count = 0;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const double dx = (x + 0.5) - center.x;
      const double dy = (y + 0.5) - center.y;
      if (dx * dx + dy * dy > r2) continue;
      for (int c = 0; c < 3; ++c)
        acc += std::abs(img.at(x, y, c) - background.at(x, y, c));
      ++count;
    }
  return acc / (3 * count);
}

}  // namespace

TEST_CASE("fcd style rules hold") {
  Rng rng(404);
  const FcdParams params = small_fcd();

  SUBCASE("style 1 labels the single disk center") {
    for (int i = 0; i < 20; ++i) {
      const FcdExample ex = fcd_generate(rng, nullptr, params, 1);
      REQUIRE(ex.scene.centers_px.size() == 1);
      CHECK(ex.label.x == ex.scene.centers_px[0].x / params.image_edge);
      CHECK(ex.label.y == ex.scene.centers_px[0].y / params.image_edge);
    }
  }

  SUBCASE("style 3 repeats one genome across all three disks") {
    for (int i = 0; i < 20; ++i) {
      const FcdExample ex = fcd_generate(rng, nullptr, params, 3);
      REQUIRE(ex.scene.genomes.size() == 3);
      CHECK(ex.scene.genomes[0] == ex.scene.genomes[1]);
      CHECK(ex.scene.genomes[0] == ex.scene.genomes[2]);
    }
  }

  SUBCASE("muting moves a disk toward the background") {
    int checked = 0;
    for (int i = 0; i < 30; ++i) {
      const FcdExample ex = fcd_generate(rng, nullptr, params, 2);
      // the scene again, without any disks, is the bare background
      predator::FcdScene bare = ex.scene;
      bare.genomes.clear();
      bare.centers_px.clear();
      bare.muting.clear();
      const Image background = render_fcd_scene(bare, nullptr, params);

      for (int d = 0; d < 3; ++d) {
        if (d == ex.scene.label_disk) continue;
        // counterfactual: the same disk drawn unaltered
        predator::FcdScene unmuted = ex.scene;
        unmuted.muting[d] = {};
        const Image loud = render_fcd_scene(unmuted, nullptr, params);
        const double muted_contrast = disk_contrast(
            ex.image, background, ex.scene.centers_px[d], params.disk_diameter());
        const double full_contrast = disk_contrast(
            loud, background, ex.scene.centers_px[d], params.disk_diameter());
        if (full_contrast < 0.02) continue;  // nearly invisible draw; skip
        CHECK(muted_contrast < full_contrast);
        ++checked;
      }
    }
    CHECK(checked >= 20);
  }
}

TEST_CASE("fcd labels are recoverable by re-rendering the scene") {
  Rng rng(405);
  const FcdParams params = small_fcd();
  for (int i = 0; i < 15; ++i) {
    const FcdExample ex = fcd_generate(rng, nullptr, params);
    const Image again = render_fcd_scene(ex.scene, nullptr, params);
    REQUIRE(again == ex.image);
    const Vec2 center = ex.scene.centers_px[ex.scene.label_disk];
    CHECK(ex.label.x == center.x / params.image_edge);
    CHECK(ex.label.y == center.y / params.image_edge);
  }
}

TEST_CASE("fcd uses photo crops when a background set is supplied") {
  Rng rng(406);
  const FcdParams params = small_fcd();
  sim::BackgroundSet photos;
  photos.images.push_back(texsyn::render_genome_image(
      gp::random_tree(texsyn::ValueType::Texture, 30, rng), 512));
  photos.names.push_back("synthetic");

  int photo_backed = 0;
  for (int i = 0; i < 40; ++i) {
    const FcdExample ex = fcd_generate(rng, &photos, params);
    if (ex.scene.photo_background) {
      ++photo_backed;
      const Image again = render_fcd_scene(ex.scene, &photos, params);
      REQUIRE(again == ex.image);
    }
  }
  // fair coin: roughly half the examples should use the photo
  CHECK(photo_backed > 5);
  CHECK(photo_backed < 35);
}

TEST_CASE("forced-style dataset mode yields one of each") {
  Rng rng(407);
  const FcdParams params = small_fcd();
  std::map<int, int> styles;
  for (int s : {1, 2, 3}) ++styles[fcd_generate(rng, nullptr, params, s).style];
  CHECK(styles == std::map<int, int>{{1, 1}, {2, 1}, {3, 1}});
}

TEST_CASE("style draw is uniform over 30k trials") {
  Rng rng(408);
  std::map<int, int> counts;
  const int trials = 30'000;
  for (int i = 0; i < trials; ++i) ++counts[predator::draw_style(rng)];
  for (int s : {1, 2, 3})
    CHECK(oracles::binomial_within_sigma(counts[s], trials, 1.0 / 3.0, 3.0));
}

TEST_CASE("augmentation transforms image and label together") {
  Rng rng(409);
  const FcdParams params = small_fcd();
  const FcdExample ex = fcd_generate(rng, nullptr, params, 1);
  const int edge = params.image_edge;

  SUBCASE("identity spec changes nothing") {
    const auto out = predator::augment_with(ex.image, ex.label, {});
    CHECK(out.image == ex.image);
    CHECK(out.label == ex.label);
  }

  SUBCASE("horizontal flip reflects the label") {
    predator::AugmentSpec spec;
    spec.hflip = true;
    const auto out = predator::augment_with(ex.image, {0.25, 0.6}, spec);
    CHECK(out.label.x == doctest::Approx(0.75));
    CHECK(out.label.y == doctest::Approx(0.6));
  }

  SUBCASE("the disk-center pixel follows every rotation") {
    for (int turns = 0; turns < 4; ++turns) {
      predator::AugmentSpec spec;
      spec.quarter_turns = turns;
      const auto out = predator::augment_with(ex.image, ex.label, spec);
      const auto pixel_at = [edge](const Image& img, Vec2 norm) {
        return img.rgb(static_cast<int>(norm.x * edge),
                       static_cast<int>(norm.y * edge));
      };
      const Rgb before = pixel_at(ex.image, ex.label);
      const Rgb after = pixel_at(out.image, out.label);
      CHECK(before.r == after.r);
      CHECK(before.g == after.g);
      CHECK(before.b == after.b);
    }
  }

  SUBCASE("random draws keep the label inside the unit square") {
    for (int i = 0; i < 500; ++i) {
      const auto out = predator::augment(ex.image, ex.label, rng);
      CHECK(out.label.x >= 0.0);
      CHECK(out.label.x <= 1.0);
      CHECK(out.label.y >= 0.0);
      CHECK(out.label.y <= 1.0);
    }
  }
}

TEST_CASE("fcd datasets export as PNGs with a label manifest") {
  namespace fs = std::filesystem;
  Rng rng(415);
  const FcdParams params = [] {
    FcdParams p;
    p.image_edge = 32;
    p.genome_max_size = 20;
    return p;
  }();
  const auto dataset = predator::fcd_dataset(3, rng, nullptr, params);
  const fs::path dir = fs::temp_directory_path() / "camo_fcd_export_test";
  fs::remove_all(dir);
  std::vector<std::string> written;
  const std::string manifest_path =
      save_fcd_dataset(dataset, dir.string(), &written);
  CHECK(written.size() == 4);  // three images plus the manifest

  std::ifstream manifest(manifest_path);
  REQUIRE(manifest.good());
  std::string name;
  double lx, ly;
  int style;
  int rows = 0;
  while (manifest >> name >> lx >> ly >> style) {
    CHECK(fs::exists(dir / name));
    CHECK(lx == dataset[rows].label.x);
    CHECK(ly == dataset[rows].label.y);
    CHECK(style == dataset[rows].style);
    const Image back = read_image((dir / name).string());
    CHECK(back.width() == 32);
    ++rows;
  }
  CHECK(rows == 3);
  fs::remove_all(dir);
}

TEST_CASE("the reservoir collects then replaces uniformly") {
  Rng rng(410);
  PredatorAgent agent;

  SUBCASE("600 adds cap at 500, first 500 kept in order") {
    for (int i = 0; i < 500; ++i)
      reservoir_add(agent, {{}, {static_cast<double>(i), 0}}, rng);
    REQUIRE(agent.reservoir.size() == 500);
    for (int i = 0; i < 500; ++i)
      REQUIRE(agent.reservoir[i].label.x == static_cast<double>(i));
    for (int i = 500; i < 600; ++i)
      reservoir_add(agent, {{}, {static_cast<double>(i), 0}}, rng);
    CHECK(agent.reservoir.size() == 500);
  }

  SUBCASE("replacement slots are uniform within 3 sigma") {
    for (int i = 0; i < 500; ++i) reservoir_add(agent, {{}, {-1, -1}}, rng);
    std::vector<int> hits(500, 0);
    const int adds = 100'000;
    for (int i = 0; i < adds; ++i) {
      reservoir_add(agent, {{}, {static_cast<double>(i), 1}}, rng);
      // the slot now holding label x == i is the one replaced
      for (int s = 0; s < 500; ++s)
        if (agent.reservoir[s].label.y == 1 &&
            agent.reservoir[s].label.x == static_cast<double>(i)) {
          ++hits[s];
          break;
        }
    }
    for (int s = 0; s < 500; ++s)
      REQUIRE(oracles::binomial_within_sigma(hits[s], adds, 1.0 / 500, 3.5));
  }
}

TEST_CASE("starvation is a pure function of the recent window") {
  PredatorAgent agent;

  SUBCASE("twenty straight failures starve") {
    bool starved = false;
    for (int i = 0; i < 20; ++i)
      starved = record_and_check_starvation(agent, false);
    CHECK(starved);
    CHECK(agent.history.size() == 20);
  }

  SUBCASE("exactly 8 of 20 (40%) survives the threshold") {
    for (int i = 0; i < 12; ++i) record_and_check_starvation(agent, false);
    bool starved = false;
    for (int i = 0; i < 8; ++i)
      starved = record_and_check_starvation(agent, true);
    CHECK_FALSE(starved);  // 0.40 is not < 0.40
  }

  SUBCASE("7 of 20 starves") {
    for (int i = 0; i < 13; ++i) record_and_check_starvation(agent, false);
    bool starved = false;
    for (int i = 0; i < 7; ++i)
      starved = record_and_check_starvation(agent, true);
    CHECK(starved);
  }

  SUBCASE("a part-filled history never starves") {
    for (int i = 0; i < 19; ++i)
      CHECK_FALSE(record_and_check_starvation(agent, false));
  }

  SUBCASE("the window forgets outcomes older than 20") {
    for (int i = 0; i < 20; ++i) record_and_check_starvation(agent, true);
    bool starved = false;
    for (int i = 0; i < 12; ++i)
      starved = record_and_check_starvation(agent, false);
    CHECK_FALSE(starved);  // 8 of 20 successes left: exactly the threshold
    starved = record_and_check_starvation(agent, false);
    CHECK(starved);  // 7 of 20 drops below
    CHECK(agent.history.size() == 20);
  }
}

TEST_CASE("initialization and offspring stay within the noise bound") {
  Rng rng(411);
  vision::Net<float> pretrained(tiny_spec());
  pretrained.init_weights(rng);

  SUBCASE("each initialized agent is a bounded perturbation of the base") {
    const auto agents = predator::init_predators(pretrained, 8, rng);
    REQUIRE(agents.size() == 8);
    for (const auto& a : agents) {
      REQUIRE(a.net.has_value());
      CHECK(a.reservoir.empty());
      CHECK(a.history.empty());
      double worst = 0, total_change = 0;
      for (size_t i = 0; i < pretrained.params().size(); ++i) {
        const double d = std::abs(static_cast<double>(a.net->params()[i]) -
                                  pretrained.params()[i]);
        worst = std::max(worst, d);
        total_change += d;
      }
      CHECK(worst < 0.003);
      CHECK(total_change > 0.0);  // differs from the base somewhere
    }
    // agents differ pairwise on sampled parameters
    Rng pick(1);
    for (size_t a = 0; a < agents.size(); ++a)
      for (size_t b = a + 1; b < agents.size(); ++b) {
        bool differ = false;
        for (int s = 0; s < 64 && !differ; ++s) {
          const size_t i = static_cast<size_t>(pick.uniform_int(
              0, static_cast<int64_t>(pretrained.params().size()) - 1));
          differ = agents[a].net->params()[i] != agents[b].net->params()[i];
        }
        CHECK(differ);
      }
  }

  SUBCASE("offspring of a single parent stays within +-0.003") {
    const auto agents = predator::init_predators(pretrained, 1, rng);
    const auto child = predator::spawn_predator_offspring(
        {&agents[0]}, rng, /*fresh_id=*/99);
    CHECK(child.id == 99);
    CHECK(child.reservoir.empty());
    CHECK(child.history.empty());
    double worst = 0;
    for (size_t i = 0; i < child.net->params().size(); ++i)
      worst = std::max(worst,
                       std::abs(static_cast<double>(child.net->params()[i]) -
                                agents[0].net->params()[i]));
    CHECK(worst < 0.003);
  }

  SUBCASE("parent choice is uniform over 10k spawns") {
    const auto agents = predator::init_predators(pretrained, 2, rng);
    // make the parents distinguishable by one parameter gap > 2 * noise
    auto a = agents[0], b = agents[1];
    a.net->params()[0] = 0.0f;
    b.net->params()[0] = 1.0f;
    int from_a = 0;
    const int spawns = 10'000;
    for (int i = 0; i < spawns; ++i) {
      const auto child =
          predator::spawn_predator_offspring({&a, &b}, rng, 100 + i);
      if (std::abs(child.net->params()[0]) < 0.5f) ++from_a;
    }
    CHECK(oracles::binomial_within_sigma(from_a, spawns, 0.5, 3.0));
  }
}

TEST_CASE("fine-tuning consumes the reservoir") {
  Rng rng(412);
  const auto spec = tiny_spec();
  vision::Net<float> base(spec);
  base.init_weights(rng);

  SUBCASE("an empty reservoir is a no-op") {
    PredatorAgent agent;
    agent.net = base;
    CHECK_FALSE(fine_tune(agent, rng));
    CHECK(agent.net->params() == base.params());
  }

  SUBCASE("a reservoir of one trains on a minibatch of one") {
    PredatorAgent agent;
    agent.net = base;
    TrainExample ex;
    ex.chw.assign(base.input_size(), 0.3f);
    ex.label = {0.2, 0.8};
    reservoir_add(agent, ex, rng);
    CHECK(fine_tune(agent, rng));
    CHECK(agent.net->params() != base.params());
  }

  SUBCASE("loss trends downward on a frozen reservoir") {
    PredatorAgent agent;
    agent.net = base;
    for (int i = 0; i < 8; ++i) {
      TrainExample ex;
      ex.chw.resize(base.input_size());
      for (auto& v : ex.chw) v = static_cast<float>(rng.uniform());
      ex.label = {rng.uniform(), rng.uniform()};
      reservoir_add(agent, ex, rng);
    }
    const auto reservoir_loss = [&agent]() {
      double total = 0;
      for (const auto& ex : agent.reservoir)
        total += vision::mse_loss(agent.net->predict(ex.chw.data()), ex.label);
      return total / agent.reservoir.size();
    };
    const double before = reservoir_loss();
    for (int i = 0; i < 200; ++i) fine_tune(agent, rng, 1e-3);
    CHECK(reservoir_loss() < before);
  }
}

TEST_CASE("pretraining with zero epochs returns the raw initialization") {
  Rng data_rng(413);
  const FcdParams params = [] {
    FcdParams p;
    p.image_edge = 16;
    p.genome_max_size = 20;
    return p;
  }();
  const auto dataset = predator::fcd_dataset(3, data_rng, nullptr, params);

  auto spec = tiny_spec();
  Rng train_rng(414);
  const auto net = predator::pretrain(spec, dataset, {0, 2, 1e-3}, train_rng);

  vision::Net<float> expected(spec);
  Rng init_rng = Rng(414).derive("init");
  expected.init_weights(init_rng);
  CHECK(net.params() == expected.params());
}
