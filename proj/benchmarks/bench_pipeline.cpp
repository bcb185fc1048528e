#include <benchmark/benchmark.h>

#include "dppsum/corpus.hpp"
#include "dppsum/dpp.hpp"
#include "dppsum/learning.hpp"
#include "dppsum/rng.hpp"
#include "dppsum/segments.hpp"
#include "dppsum/similarity.hpp"
#include "dppsum/transfer.hpp"

namespace {

using namespace dppsum;

// 20 exemplars of 100 frames, one 100-frame test video.
struct Workload {
  std::vector<Exemplar> exemplars;
  Matrix test;
  std::vector<int> test_bounds;

  Workload() {
    SynthConfig cfg;
    cfg.n_videos = 21;
    cfg.n_frames = 100;
    cfg.dim = 32;
    cfg.keyframes_per_video = 6;
    cfg.segment_len = 10;
    cfg.noise_level = 0.1;
    cfg.seed = 42;
    auto videos = gen_synthetic_videos(cfg);
    test = videos.back().frames;
    test_bounds = videos.back().boundaries;
    videos.pop_back();
    exemplars = make_exemplars(videos, Granularity::frame);
  }

  TransferModel model(Granularity g, SimilarityKind kind) const {
    TransferModel m;
    m.exemplars = exemplars;
    m.sim.kind = kind;
    m.granularity = g;
    m.alphas = Vector::Constant(static_cast<Eigen::Index>(exemplars.size()), 2.0);
    return m;
  }
};

const Workload& workload() {
  static Workload w;
  return w;
}

void BM_SimilarityMatrixRbf(benchmark::State& state) {
  const auto& w = workload();
  SimilarityConfig cfg;
  cfg.kind = SimilarityKind::rbf;
  for (auto _ : state) {
    benchmark::DoNotOptimize(similarity_matrix(w.test, w.exemplars[0].frames, cfg));
  }
}
BENCHMARK(BM_SimilarityMatrixRbf);

void BM_SynthesizeFrame(benchmark::State& state) {
  const auto& w = workload();
  const auto model = w.model(Granularity::frame, SimilarityKind::rbf);
  for (auto _ : state) {
    benchmark::DoNotOptimize(synthesize_kernel(model, w.test));
  }
}
BENCHMARK(BM_SynthesizeFrame);

void BM_SynthesizeShotMean(benchmark::State& state) {
  const auto& w = workload();
  const auto model = w.model(Granularity::shot_mean, SimilarityKind::rbf);
  for (auto _ : state) {
    benchmark::DoNotOptimize(synthesize_kernel(model, w.test, {}, w.test_bounds));
  }
}
BENCHMARK(BM_SynthesizeShotMean);

void BM_SummarizeFrame(benchmark::State& state) {
  const auto& w = workload();
  const auto model = w.model(Granularity::frame, SimilarityKind::rbf);
  for (auto _ : state) {
    benchmark::DoNotOptimize(summarize(model, w.test));
  }
}
BENCHMARK(BM_SummarizeFrame);

void BM_MapGreedy(benchmark::State& state) {
  const auto& w = workload();
  const auto model = w.model(Granularity::frame, SimilarityKind::rbf);
  const Matrix kernel = synthesize_kernel(model, w.test);
  for (auto _ : state) {
    benchmark::DoNotOptimize(map_greedy(kernel));
  }
}
BENCHMARK(BM_MapGreedy);

void BM_NllAndGradient(benchmark::State& state) {
  Rng rng(7);
  SynthConfig cfg;
  cfg.n_videos = 5;
  cfg.n_frames = 30;
  cfg.dim = 16;
  cfg.keyframes_per_video = 4;
  cfg.noise_level = 0.1;
  cfg.seed = 3;
  const auto exemplars = make_exemplars(gen_synthetic_videos(cfg), Granularity::frame);
  SimilarityConfig sim;
  sim.kind = SimilarityKind::rbf;
  FitOptions opts;
  const auto st = init_state(exemplars, sim, Granularity::frame, opts);
  for (auto _ : state) {
    benchmark::DoNotOptimize(leave_self_in_nll(st, exemplars));
    benchmark::DoNotOptimize(grad_alpha(st, exemplars));
  }
}
BENCHMARK(BM_NllAndGradient);

}  // namespace

BENCHMARK_MAIN();
