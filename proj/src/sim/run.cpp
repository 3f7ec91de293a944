#include "camo/sim/run.hpp"

#include <cinttypes>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>

#include "camo/core/image_io.hpp"
#include "camo/sim/annotate.hpp"
#include "camo/sim/sqm.hpp"
#include "camo/vision/checkpoint.hpp"

namespace camo::sim {
namespace {

std::string fmt(const char* format, ...) {
  char buf[128];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

class SqmLogger {
 public:
  SqmLogger(const RunConfig& config, const BackgroundSet& backgrounds,
            const vision::Net<float>* pretrained, std::ofstream& out)
      : config_(config),
        backgrounds_(backgrounds),
        out_(out),
        rng_(Rng(config.seed).derive("sqm")) {
    if (pretrained == nullptr)
      throw std::invalid_argument("run: SQM needs a pretrained checkpoint");
    standard_.emplace(*pretrained);
    geometry_ = {config.sim.tournament_edge, config.sim.prey_diameter,
                 config.sim.net_input_edge};
  }

  double measure(int64_t step, const gp::PreyPopulation& prey) {
    const int sample = std::min(config_.sqm_sample, prey.size());
    std::vector<size_t> order(prey.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (int i = 0; i < sample; ++i) {
      const size_t j = static_cast<size_t>(
          rng_.uniform_int(i, static_cast<int64_t>(order.size()) - 1));
      std::swap(order[i], order[j]);
    }
    double total = 0.0;
    std::string line = std::to_string(step);
    std::string scores;
    for (int i = 0; i < sample; ++i) {
      const auto& ind = prey.at(order[i]);
      const double score = sqm(ind.genome, *standard_, backgrounds_,
                               geometry_, rng_, config_.sqm_trials);
      total += score;
      scores += fmt("\t%" PRIu64 ":%g", ind.id, score);
    }
    const double mean = total / sample;
    out_ << line << fmt("\t%g", mean) << scores << '\n' << std::flush;
    return mean;
  }

 private:
  const RunConfig& config_;
  const BackgroundSet& backgrounds_;
  std::ofstream& out_;
  Rng rng_;
  std::optional<NetLocalizer> standard_;
  SqmGeometry geometry_;
};

}  // namespace

std::string format_step_line(const TournamentRecord& rec) {
  std::string line = fmt("%" PRId64 "\t%d", rec.step, rec.deme);
  for (int i = 0; i < 3; ++i)
    line += fmt("\t%" PRIu64 "\t%d\t%d", rec.prey_ids[i],
                static_cast<int>(rec.prey_centers[i].x),
                static_cast<int>(rec.prey_centers[i].y));
  for (int i = 0; i < 3; ++i)
    line += fmt("\t%" PRIu64 "\t%.17g\t%.17g\t%.17g", rec.predator_ids[i],
                rec.predictions[i].x, rec.predictions[i].y,
                rec.aim_errors[i]);
  line += fmt("\t%" PRId64 "\t%" PRId64, rec.eaten_prey_id,
              rec.starved_predator_id);
  return line;
}

RunArtifacts run(const RunConfig& config, const BackgroundSet& backgrounds,
                 const vision::Net<float>* pretrained) {
  namespace fs = std::filesystem;
  RunArtifacts artifacts;
  const fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir / "visual");
  fs::create_directories(out_dir / "checkpoints");

  std::optional<gp::PreyPopulation> initial;
  if (!config.resume_population.empty())
    initial = gp::PreyPopulation::load(config.resume_population);
  Simulation sim(config.sim, &backgrounds, pretrained, config.seed,
                 std::move(initial));

  const std::string initial_pop =
      (out_dir / "checkpoints" / "population_initial.txt").string();
  sim.prey().save(initial_pop);
  artifacts.files.push_back(initial_pop);

  artifacts.steps_log_path = (out_dir / "steps.log").string();
  std::ofstream steps_log(artifacts.steps_log_path);
  if (!steps_log)
    throw std::runtime_error("cannot write " + artifacts.steps_log_path);
  artifacts.files.push_back(artifacts.steps_log_path);

  std::ofstream sqm_log;
  std::optional<SqmLogger> sqm_logger;
  if (config.sqm_interval > 0) {
    artifacts.sqm_log_path = (out_dir / "sqm.log").string();
    sqm_log.open(artifacts.sqm_log_path);
    if (!sqm_log)
      throw std::runtime_error("cannot write " + artifacts.sqm_log_path);
    artifacts.files.push_back(artifacts.sqm_log_path);
    sqm_logger.emplace(config, backgrounds, pretrained, sqm_log);
    sqm_logger->measure(0, sim.prey());
  }

  for (int64_t step = 1; step <= config.steps; ++step) {
    const TournamentRecord rec = sim.step();
    steps_log << format_step_line(rec) << '\n' << std::flush;
    if (rec.eaten_prey_id < 0) ++artifacts.abandoned_steps;

    if (config.save_frequency > 0 && step % config.save_frequency == 0) {
      const std::string name = fmt("step_%06" PRId64 ".png", step);
      const std::string path = (out_dir / "visual" / name).string();
      write_png(annotate_tournament(rec), path);
      artifacts.files.push_back(path);
    }
    const bool sqm_due =
        sqm_logger && (step % config.sqm_interval == 0 || step == config.steps);
    if (sqm_due) sqm_logger->measure(step, sim.prey());
  }
  artifacts.steps_run = config.steps;
  artifacts.size_fallbacks = sim.size_fallback_count();

  const std::string final_pop =
      (out_dir / "checkpoints" / "population_final.txt").string();
  sim.prey().save(final_pop);
  artifacts.files.push_back(final_pop);

  if (config.sim.predator_mode == PredatorMode::Learning) {
    int index = 0;
    for (const auto& agent : sim.predators()) {
      const std::string path =
          (out_dir / "checkpoints" / fmt("predator_%04d.ckpt", index++))
              .string();
      vision::save_checkpoint(*agent.net, path);
      artifacts.files.push_back(path);
    }
  }
  return artifacts;
}

}  // namespace camo::sim
