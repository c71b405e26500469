// Parallel kernels vs. the serial reference implementations.

#include <benchmark/benchmark.h>

#include <vector>

#include "metaeval/meta_metrics.hpp"
#include "metaeval/noise.hpp"
#include "metaeval/reference.hpp"
#include "metaeval/rng.hpp"
#include "metaeval/score_matrix.hpp"
#include "metaeval/stats.hpp"

namespace {

using namespace metaeval;

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = rng.normal(1.0) + 0.3 * rng.uniform();
  return out;
}

void BM_PearsonReferenceSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto u = random_vector(n, 1);
  const auto v = random_vector(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::pearson(u, v));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

void BM_PearsonParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto u = random_vector(n, 1);
  const auto v = random_vector(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pearson(u, v));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

PairedData bench_pair(std::size_t systems, std::size_t segments) {
  const ScoreMatrix y = synthetic_mqm_matrix(systems, segments, 11);
  const ScoreMatrix x = inject_noise(y, {NoiseKind::kRandom, 2.0, 17});
  return pair(x, y);
}

void BM_BuildPairwiseDiffs(benchmark::State& state) {
  const PairedData d = bench_pair(26, 1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_pairwise_diffs(d));
  }
}

void BM_Pdp(benchmark::State& state) {
  const PairedData d = bench_pair(26, 1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pdp(d));
  }
}

void BM_SegmentwisePearson(benchmark::State& state) {
  const PairedData d = bench_pair(26, 1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(segmentwise_pearson(d));
  }
}

void BM_CalibrateAccEq(benchmark::State& state) {
  const PairedData d = bench_pair(26, 1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(calibrate_acc_eq(d));
  }
}

void BM_AccEqGridReference(benchmark::State& state) {
  // Brute-force oracle at a coarse grid, for scale comparison with the sweep.
  const PairedData d = bench_pair(26, 100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::best_acc_eq_on_grid(d, 64));
  }
}

void BM_SdpReplicates(benchmark::State& state) {
  const ScoreMatrix y = synthetic_mqm_matrix(20, 500, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sdp(y, Statistic::kPdp, {NoiseKind::kSegmentBias, 5.0, 17},
            static_cast<std::size_t>(state.range(0))));
  }
}

}  // namespace

BENCHMARK(BM_PearsonReferenceSerial)->Arg(1 << 14)->Arg(1 << 20)->Arg(1 << 23);
BENCHMARK(BM_PearsonParallel)->Arg(1 << 14)->Arg(1 << 20)->Arg(1 << 23);
BENCHMARK(BM_BuildPairwiseDiffs);
BENCHMARK(BM_Pdp);
BENCHMARK(BM_SegmentwisePearson);
BENCHMARK(BM_CalibrateAccEq);
BENCHMARK(BM_AccEqGridReference);
BENCHMARK(BM_SdpReplicates)->Arg(8)->Arg(30);

BENCHMARK_MAIN();
