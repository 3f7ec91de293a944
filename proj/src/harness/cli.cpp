#include "camo/harness/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "camo/core/image_io.hpp"
#include "camo/harness/backgrounds.hpp"
#include "camo/harness/manifest.hpp"
#include "camo/predator/pretrain.hpp"
#include "camo/sim/run.hpp"
#include "camo/sim/sqm.hpp"
#include "camo/texsyn/render.hpp"
#include "camo/vision/checkpoint.hpp"

namespace camo::harness {
namespace {

namespace fs = std::filesystem;

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// machine-readable dump of the effective configuration; one artifact of
// every subcommand that writes an output directory
std::string write_effective_config(const std::string& output_dir,
                                   const KeyValues& values) {
  fs::create_directories(output_dir);
  const std::string path = (fs::path(output_dir) / "config.txt").string();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& [k, v] : values) out << k << "=" << v << '\n';
  return path;
}

std::string trim_number(double v) {
  std::string s = std::to_string(v);
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

struct CommonArgs {
  std::string background_dir;
  std::string output_dir = ".";
  double background_scale = 0.5;
  uint64_t seed = sim::kDefaultSeed;
};

void add_common(CLI::App& cmd, CommonArgs& args, bool backgrounds_required) {
  auto* bg = cmd.add_option("--background-dir", args.background_dir,
                            "background image directory");
  if (backgrounds_required) bg->required();
  cmd.add_option("--output-dir", args.output_dir, "output directory")
      ->capture_default_str();
  cmd.add_option("--background-scale", args.background_scale,
                 "scale factor applied to background images")
      ->capture_default_str();
  cmd.add_option("--seed", args.seed, "random seed")->capture_default_str();
}

int do_render(const std::string& genome_path, const std::string& out_path,
              int size, bool disk) {
  std::ifstream in(genome_path);
  if (!in) throw std::runtime_error("cannot read genome: " + genome_path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  const texsyn::TextureGenome genome = texsyn::parse_genome(text);
  Image img;
  if (disk) {
    const texsyn::DiskRaster raster = texsyn::render_disk(genome, size);
    img = raster.image;
  } else {
    img = texsyn::render_genome_image(genome, size);
  }
  write_png(img, out_path);
  return 0;
}

int do_pretrain(const CommonArgs& common, int examples, int epochs, int batch,
                double learning_rate, int input_edge, int base_filters,
                int max_tree_size, bool save_dataset) {
  sim::BackgroundSet backgrounds =
      load_background_set(common.background_dir, common.background_scale);

  predator::FcdParams fcd_params;
  fcd_params.image_edge = input_edge;
  fcd_params.genome_max_size = max_tree_size;

  Rng rng(common.seed);
  Rng dataset_rng = rng.derive("dataset");
  std::cerr << "generating " << examples << " training examples...\n";
  const auto dataset =
      predator::fcd_dataset(examples, dataset_rng, &backgrounds, fcd_params);

  std::vector<std::string> artifacts;
  if (save_dataset) {
    const std::string dir = (fs::path(common.output_dir) / "dataset").string();
    save_fcd_dataset(dataset, dir, &artifacts);
  }

  vision::ConvNetSpec spec;
  spec.input_edge = input_edge;
  spec.base_filters = base_filters;

  const std::string log_path =
      (fs::path(common.output_dir) / "pretrain.log").string();
  fs::create_directories(common.output_dir);
  std::ofstream log(log_path);
  predator::PretrainConfig config{epochs, batch, learning_rate};
  Rng train_rng = rng.derive("pretrain");
  vision::Net<float> net = predator::pretrain(
      spec, dataset, config, train_rng, [&log](int epoch, double loss) {
        log << epoch << '\t' << loss << '\n' << std::flush;
        std::cerr << "epoch " << epoch << " loss " << loss << '\n';
      });
  artifacts.push_back(log_path);

  fs::create_directories(fs::path(common.output_dir) / "checkpoints");
  const std::string ckpt =
      (fs::path(common.output_dir) / "checkpoints" / "pretrained.ckpt")
          .string();
  vision::save_checkpoint(net, ckpt);
  artifacts.push_back(ckpt);

  artifacts.push_back(write_effective_config(
      common.output_dir,
      {{"command", "pretrain"},
       {"background-dir", common.background_dir},
       {"output-dir", common.output_dir},
       {"background-scale", trim_number(common.background_scale)},
       {"seed", std::to_string(common.seed)},
       {"examples", std::to_string(examples)},
       {"epochs", std::to_string(epochs)},
       {"batch", std::to_string(batch)},
       {"learning-rate", trim_number(learning_rate)},
       {"input-edge", std::to_string(input_edge)},
       {"base-filters", std::to_string(base_filters)},
       {"max-init-tree-size", std::to_string(max_tree_size)}}));
  write_manifest(common.output_dir, artifacts);
  std::cerr << "pretrained checkpoint: " << ckpt << '\n';
  return 0;
}

int do_run(const CommonArgs& common, sim::RunConfig config,
           const std::string& pretrained_path, const std::string& mode,
           const std::string& label_mode) {
  config.seed = common.seed;
  config.output_dir = common.output_dir;
  if (mode == "stub")
    config.sim.predator_mode = sim::PredatorMode::Stub;
  else if (mode == "learning")
    config.sim.predator_mode = sim::PredatorMode::Learning;
  else
    throw std::runtime_error("unknown --predator-mode: " + mode);
  if (label_mode == "nearest")
    config.sim.label_mode = sim::FineTuneLabelMode::NearestTruth;
  else if (label_mode == "own")
    config.sim.label_mode = sim::FineTuneLabelMode::OwnPrediction;
  else
    throw std::runtime_error("unknown --fine-tune-label: " + label_mode);

  sim::BackgroundSet backgrounds =
      load_background_set(common.background_dir, common.background_scale,
                          config.sim.tournament_edge);

  std::optional<vision::Net<float>> pretrained;
  if (!pretrained_path.empty())
    pretrained = vision::load_checkpoint(pretrained_path);
  if (config.sim.predator_mode == sim::PredatorMode::Learning && !pretrained)
    throw std::runtime_error("learning predators need --pretrained");
  if (pretrained) {
    config.sim.net_input_edge = pretrained->spec().input_edge;
    if (config.sim.tournament_edge % config.sim.net_input_edge != 0)
      throw std::runtime_error("pretrained input edge must divide 512");
  }

  sim::RunArtifacts artifacts =
      sim::run(config, backgrounds, pretrained ? &*pretrained : nullptr);

  artifacts.files.push_back(write_effective_config(
      common.output_dir,
      {{"command", "run"},
       {"background-dir", common.background_dir},
       {"output-dir", common.output_dir},
       {"background-scale", trim_number(common.background_scale)},
       {"seed", std::to_string(common.seed)},
       {"individuals", std::to_string(config.sim.prey_population)},
       {"subpopulations", std::to_string(config.sim.demes)},
       {"predators", std::to_string(config.sim.predator_population)},
       {"steps", std::to_string(config.steps)},
       {"max-init-tree-size", std::to_string(config.sim.max_init_tree_size)},
       {"min-crossover-tree-size",
        std::to_string(config.sim.reproduction.min_crossover_size)},
       {"max-crossover-tree-size",
        std::to_string(config.sim.reproduction.max_crossover_size)},
       {"save-frequency", std::to_string(config.save_frequency)},
       {"sqm-interval", std::to_string(config.sqm_interval)},
       {"sqm-sample", std::to_string(config.sqm_sample)},
       {"sqm-trials", std::to_string(config.sqm_trials)},
       {"predator-mode", mode},
       {"fine-tune-label", label_mode},
       {"pretrained", pretrained_path},
       {"population", config.resume_population}}));
  write_manifest(common.output_dir, artifacts.files);

  std::cerr << "run complete: " << artifacts.steps_run << " steps, "
            << artifacts.abandoned_steps << " abandoned, "
            << artifacts.size_fallbacks << " crossover size fallbacks\n";
  return 0;
}

int do_sqm(const CommonArgs& common, const std::string& pretrained_path,
           const std::string& population_path, int trials, int sample) {
  sim::BackgroundSet backgrounds =
      load_background_set(common.background_dir, common.background_scale);
  const vision::Net<float> net = vision::load_checkpoint(pretrained_path);
  const gp::PreyPopulation population =
      gp::PreyPopulation::load(population_path);

  sim::SqmGeometry geometry;
  geometry.net_input_edge = net.spec().input_edge;
  sim::NetLocalizer standard(net);
  Rng rng = Rng(common.seed).derive("sqm");

  const int count =
      sample > 0 ? std::min(sample, population.size()) : population.size();
  std::vector<size_t> order(population.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (int i = 0; i < count; ++i) {
    const size_t j = static_cast<size_t>(
        rng.uniform_int(i, static_cast<int64_t>(order.size()) - 1));
    std::swap(order[i], order[j]);
  }

  fs::create_directories(common.output_dir);
  const std::string log_path =
      (fs::path(common.output_dir) / "sqm.log").string();
  std::ofstream log(log_path);
  if (!log) throw std::runtime_error("cannot write " + log_path);
  double total = 0.0;
  for (int i = 0; i < count; ++i) {
    const auto& ind = population.at(order[i]);
    const double score =
        sim::sqm(ind.genome, standard, backgrounds, geometry, rng, trials);
    total += score;
    log << ind.id << '\t' << score << '\n';
  }
  const double mean = total / count;
  log << "mean\t" << mean << '\n';

  const std::string config_path = write_effective_config(
      common.output_dir,
      {{"command", "sqm"},
       {"background-dir", common.background_dir},
       {"output-dir", common.output_dir},
       {"background-scale", trim_number(common.background_scale)},
       {"seed", std::to_string(common.seed)},
       {"pretrained", pretrained_path},
       {"population", population_path},
       {"trials", std::to_string(trials)},
       {"sample", std::to_string(sample)}});
  write_manifest(common.output_dir, {log_path, config_path});
  std::cout << mean << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"coevolutionary camouflage simulator"};
  app.require_subcommand(1);
  // flags override file values, which override defaults; the file holds
  // key=value lines under a [subcommand] section
  app.set_config("--config", "",
                 "key=value configuration file with [subcommand] sections");

  // pretrain
  auto* pre = app.add_subcommand(
      "pretrain", "generate the find-conspicuous-disk dataset and train");
  CommonArgs pre_common;
  int examples = 20000, epochs = 25, batch = 32;
  double learning_rate = 1e-3;
  int pre_input_edge = 128, pre_base_filters = 16, pre_tree_size = 100;
  bool save_dataset = false;
  add_common(*pre, pre_common, true);
  pre->add_option("--examples", examples)->capture_default_str();
  pre->add_option("--epochs", epochs)->capture_default_str();
  pre->add_option("--batch", batch)->capture_default_str();
  pre->add_option("--learning-rate", learning_rate)->capture_default_str();
  pre->add_option("--input-edge", pre_input_edge)->capture_default_str();
  pre->add_option("--base-filters", pre_base_filters)->capture_default_str();
  pre->add_option("--max-init-tree-size", pre_tree_size)->capture_default_str();
  pre->add_flag("--save-dataset", save_dataset,
                "also write the dataset as PNGs with a manifest");

  // run
  auto* runc = app.add_subcommand("run", "execute a coevolution run");
  CommonArgs run_common;
  sim::RunConfig run_config;
  std::string pretrained_path, predator_mode = "learning",
              fine_tune_label = "nearest";
  int window_width = 1200, window_height = 800;
  add_common(*runc, run_common, true);
  runc->add_option("--individuals", run_config.sim.prey_population)
      ->capture_default_str();
  runc->add_option("--subpopulations", run_config.sim.demes)
      ->capture_default_str();
  runc->add_option("--predators", run_config.sim.predator_population)
      ->capture_default_str();
  runc->add_option("--steps", run_config.steps)->capture_default_str();
  runc->add_option("--max-init-tree-size", run_config.sim.max_init_tree_size)
      ->capture_default_str();
  runc->add_option("--min-crossover-tree-size",
                   run_config.sim.reproduction.min_crossover_size)
      ->capture_default_str();
  runc->add_option("--max-crossover-tree-size",
                   run_config.sim.reproduction.max_crossover_size)
      ->capture_default_str();
  runc->add_option("--save-frequency", run_config.save_frequency)
      ->capture_default_str();
  runc->add_option("--sqm-interval", run_config.sqm_interval)
      ->capture_default_str();
  runc->add_option("--sqm-sample", run_config.sqm_sample)
      ->capture_default_str();
  runc->add_option("--sqm-trials", run_config.sqm_trials)
      ->capture_default_str();
  runc->add_option("--pretrained", pretrained_path,
                   "pre-trained predator checkpoint");
  runc->add_option("--population", run_config.resume_population,
                   "resume the prey population from a checkpoint");
  runc->add_option("--predator-mode", predator_mode, "learning | stub")
      ->capture_default_str();
  runc->add_option("--fine-tune-label", fine_tune_label, "nearest | own")
      ->capture_default_str();
  runc->add_option("--window-width", window_width,
                   "accepted for compatibility; ignored");
  runc->add_option("--window-height", window_height,
                   "accepted for compatibility; ignored");

  // sqm
  auto* sqmc = app.add_subcommand(
      "sqm", "score a population checkpoint with the standard predator");
  CommonArgs sqm_common;
  std::string sqm_pretrained, sqm_population;
  int sqm_trials = 10, sqm_sample = 0;
  add_common(*sqmc, sqm_common, true);
  sqmc->add_option("--pretrained", sqm_pretrained)->required();
  sqmc->add_option("--population", sqm_population)->required();
  sqmc->add_option("--trials", sqm_trials)->capture_default_str();
  sqmc->add_option("--sample", sqm_sample, "0 scores the whole population")
      ->capture_default_str();

  // render
  auto* render = app.add_subcommand("render", "render a genome file to PNG");
  std::string genome_path, render_out;
  int render_size = 256;
  bool render_as_disk = false;
  render->add_option("--genome", genome_path)->required();
  render->add_option("--out", render_out)->required();
  render->add_option("--size", render_size)->capture_default_str();
  render->add_flag("--disk", render_as_disk, "masked disk instead of square");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*pre)
      return do_pretrain(pre_common, examples, epochs, batch, learning_rate,
                         pre_input_edge, pre_base_filters, pre_tree_size,
                         save_dataset);
    if (*runc) {
      if (runc->count("--window-width") || runc->count("--window-height"))
        std::cerr << "warning: window size options apply to the original "
                     "GUI and are ignored\n";
      return do_run(run_common, run_config, pretrained_path, predator_mode,
                    fine_tune_label);
    }
    if (*sqmc)
      return do_sqm(sqm_common, sqm_pretrained, sqm_population, sqm_trials,
                    sqm_sample);
    if (*render)
      return do_render(genome_path, render_out, render_size, render_as_disk);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace camo::harness
