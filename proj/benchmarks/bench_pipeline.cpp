// Microbenchmarks for the hot paths: per-slice metrics, channel fusion,
// augmentation, and resampling. Sizes bracket the native (240) and model
// input (1024) resolutions.

#include <benchmark/benchmark.h>

#include "tumorseg/augment.hpp"
#include "tumorseg/metrics.hpp"
#include "tumorseg/preprocess.hpp"
#include "tumorseg/rng.hpp"
#include "tumorseg/types.hpp"

using namespace tumorseg;

namespace {

BinaryMask random_mask(std::uint64_t seed, int n, double density) {
  DetRng rng(seed);
  BinaryMask mask(n, n, 0);
  for (auto& v : mask) v = rng.uniform01() < density;
  return mask;
}

PlaneF random_plane(std::uint64_t seed, int n) {
  DetRng rng(seed);
  PlaneF plane(n, n);
  for (float& v : plane) v = static_cast<float>(rng.uniform(0.0, 255.0));
  return plane;
}

void BM_DistanceTransform(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BinaryMask mask = random_mask(1, n, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(distance_transform(mask));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_DistanceTransform)->Arg(64)->Arg(240)->Arg(1024);

void BM_EvaluateMasks(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BinaryMask gt = random_mask(2, n, 0.2);
  const BinaryMask pred = random_mask(3, n, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_masks(gt, pred));
}
BENCHMARK(BM_EvaluateMasks)->Arg(240)->Arg(1024);

void BM_PcaFuse(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ModalitySlice slice;
  for (int m = 0; m < 4; ++m) slice.planes[m] = random_plane(10 + m, n);
  for (auto _ : state) benchmark::DoNotOptimize(pca_fuse(slice));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_PcaFuse)->Arg(240);

void BM_ElasticField(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(elastic_field(n, n, 30.0, 4.0, 42));
}
BENCHMARK(BM_ElasticField)->Arg(240)->Arg(1024);

void BM_ElasticDeform(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PlaneF image = random_plane(20, n);
  const BinaryMask mask = random_mask(21, n, 0.1);
  const DisplacementField field = elastic_field(n, n, 30.0, 4.0, 42);
  for (auto _ : state) benchmark::DoNotOptimize(elastic_deform(image, mask, field));
}
BENCHMARK(BM_ElasticDeform)->Arg(240);

void BM_Rotate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PlaneF image = random_plane(30, n);
  const BinaryMask mask = random_mask(31, n, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(rotate(image, mask, 13.7));
}
BENCHMARK(BM_Rotate)->Arg(240)->Arg(1024);

void BM_ResizeBilinear(benchmark::State& state) {
  const PlaneF image = random_plane(40, 240);
  const int out = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(resize_bilinear(image, out, out));
}
BENCHMARK(BM_ResizeBilinear)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
