#include <benchmark/benchmark.h>

#include "deltrace/channel.hpp"
#include "deltrace/coupling.hpp"
#include "deltrace/distinguisher.hpp"
#include "deltrace/exact_oracle.hpp"
#include "deltrace/mc_distance.hpp"

using namespace deltrace;

namespace {

void BM_Transmit(benchmark::State& state) {
  const auto x = build_xy(static_cast<int>(state.range(0))).left;
  const ChannelParams params(0.5);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(transmit(x, params, rng));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}
BENCHMARK(BM_Transmit)->Arg(16)->Arg(128)->Arg(1024);

void BM_EmbeddingCountScaled(benchmark::State& state) {
  const auto x = build_xy(static_cast<int>(state.range(0))).left;
  const auto w = transmit(x, ChannelParams(0.5), 3);
  EmbeddingCounter counter(x);
  for (auto _ : state) benchmark::DoNotOptimize(counter.count(w));
}
BENCHMARK(BM_EmbeddingCountScaled)->Arg(16)->Arg(64)->Arg(128);

void BM_EmbeddingCountBigInt(benchmark::State& state) {
  const auto x = build_xy(static_cast<int>(state.range(0))).left;
  const auto w = transmit(x, ChannelParams(0.5), 3);
  for (auto _ : state) benchmark::DoNotOptimize(embedding_count(w, x));
}
BENCHMARK(BM_EmbeddingCountBigInt)->Arg(16)->Arg(64);

void BM_ExactDistances(benchmark::State& state) {
  const auto pair = build_xy(static_cast<int>(state.range(0)));
  const ChannelParams params(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(exact_distances(pair.left, pair.right, params));
}
BENCHMARK(BM_ExactDistances)->Arg(2)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_EstimateTv(benchmark::State& state) {
  const auto pair = build_xy(static_cast<int>(state.range(0)));
  const ChannelParams params(0.5);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_tv(pair.left, pair.right, params, 1000, ++seed));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_EstimateTv)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SampleZ(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ChannelParams params(0.5);
  const auto cfg = ZStatConfig::make(n, params);
  const auto x = build_xy(n).left;
  Rng rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(sample_z(x, cfg, rng));
}
BENCHMARK(BM_SampleZ)->Arg(16)->Arg(64)->Arg(512);

void BM_StagedSample(benchmark::State& state) {
  const StagedSampler sampler(Variant::X, static_cast<int>(state.range(0)), ChannelParams(0.5));
  Rng rng(7);
  for (auto _ : state) benchmark::DoNotOptimize(sampler(rng));
}
BENCHMARK(BM_StagedSample)->Arg(3)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
