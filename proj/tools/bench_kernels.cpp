// Throughput comparison of the OpenMP kernels against their serial
// reference implementations, over the layer shapes the predator nets
// actually run. Build target: camo_bench.

#include <benchmark/benchmark.h>

#include <vector>

#include "camo/core/kernels.hpp"
#include "camo/core/rng.hpp"
#include "camo/texsyn/render.hpp"
#include "camo/gp/evolve.hpp"

using namespace camo;
using kernels::ConvDims;

namespace {

struct ConvCase {
  ConvDims dims;
  int batch;
  std::vector<float> x, w, b, y, dy, dx, dw, db;
};

ConvCase make_case(int in_c, int edge, int out_c, int stride, int batch) {
  ConvCase c;
  c.dims = kernels::make_conv_dims(in_c, edge, edge, out_c, 5, stride);
  c.batch = batch;
  Rng rng(1);
  const auto fill = [&rng](std::vector<float>& v, size_t n) {
    v.resize(n);
    for (auto& x : v) x = static_cast<float>(rng.uniform(-1, 1));
  };
  fill(c.x, static_cast<size_t>(batch) * in_c * edge * edge);
  fill(c.w, static_cast<size_t>(out_c) * in_c * 25);
  fill(c.b, out_c);
  const size_t out = static_cast<size_t>(batch) * out_c * c.dims.out_h * c.dims.out_w;
  fill(c.dy, out);
  c.y.resize(out);
  c.dx.resize(c.x.size());
  c.dw.resize(c.w.size());
  c.db.resize(c.b.size());
  return c;
}

// the five stages of the 64^2-input, 8-base-filter net at minibatch 32
ConvCase& stage(int i) {
  static std::vector<ConvCase> cases = [] {
    std::vector<ConvCase> v;
    v.push_back(make_case(3, 64, 8, 1, 32));
    v.push_back(make_case(8, 64, 16, 2, 32));
    v.push_back(make_case(16, 32, 32, 2, 32));
    v.push_back(make_case(32, 16, 64, 2, 32));
    v.push_back(make_case(64, 8, 128, 2, 32));
    return v;
  }();
  return cases[i];
}

double stage_macs(const ConvCase& c) {
  return static_cast<double>(c.batch) * c.dims.out_c * c.dims.out_h *
         c.dims.out_w * c.dims.in_c * 25;
}

void bench_conv_forward(benchmark::State& state) {
  ConvCase& c = stage(state.range(0));
  for (auto _ : state) {
    kernels::conv2d_forward(c.x.data(), c.w.data(), c.b.data(), c.y.data(),
                            c.batch, c.dims);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(stage_macs(c)));
}

void bench_conv_forward_serial(benchmark::State& state) {
  ConvCase& c = stage(state.range(0));
  for (auto _ : state) {
    kernels::ref::conv2d_forward(c.x.data(), c.w.data(), c.b.data(),
                                 c.y.data(), c.batch, c.dims);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(stage_macs(c)));
}

void bench_conv_backward_params(benchmark::State& state) {
  ConvCase& c = stage(state.range(0));
  for (auto _ : state) {
    kernels::conv2d_backward_params(c.x.data(), c.dy.data(), c.dw.data(),
                                    c.db.data(), c.batch, c.dims);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(stage_macs(c)));
}

void bench_conv_backward_params_serial(benchmark::State& state) {
  ConvCase& c = stage(state.range(0));
  for (auto _ : state) {
    kernels::ref::conv2d_backward_params(c.x.data(), c.dy.data(), c.dw.data(),
                                         c.db.data(), c.batch, c.dims);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(stage_macs(c)));
}

void bench_conv_backward_input(benchmark::State& state) {
  ConvCase& c = stage(state.range(0));
  for (auto _ : state) {
    kernels::conv2d_backward_input(c.dy.data(), c.w.data(), c.dx.data(),
                                   c.batch, c.dims);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(stage_macs(c)));
}

void bench_render_disk(benchmark::State& state) {
  Rng rng(7);
  const auto genome = gp::random_tree(texsyn::ValueType::Texture, 100, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(texsyn::render_disk(genome, 100));
  }
}

}  // namespace

BENCHMARK(bench_conv_forward)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_conv_forward_serial)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_conv_backward_params)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_conv_backward_params_serial)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_conv_backward_input)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_render_disk)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
