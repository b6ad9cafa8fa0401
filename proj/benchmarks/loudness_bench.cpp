#include <benchmark/benchmark.h>

#include "hamix/loudness.hpp"
#include "signals.hpp"

namespace {

void BM_IntegratedLoudness(benchmark::State& state) {
  const auto song = hamix::testing::make_song(44100, static_cast<double>(state.range(0)), 3).sum();
  for (auto _ : state) benchmark::DoNotOptimize(hamix::integrated_loudness(song));
}
BENCHMARK(BM_IntegratedLoudness)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace
