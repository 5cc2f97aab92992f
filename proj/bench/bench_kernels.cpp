// Parallel kernels against their serial references.
//
//   ./bench_kernels --benchmark_filter=Mul

#include <benchmark/benchmark.h>

#include <vector>

#include "critbranch/laws.hpp"
#include "critbranch/montecarlo.hpp"
#include "critbranch/oracle.hpp"
#include "critbranch/series.hpp"

using namespace critbranch;

namespace {

Series test_series(std::size_t n) {
  std::vector<double> c(n + 1);
  for (std::size_t j = 0; j <= n; ++j) c[j] = 1.0 / static_cast<double>(j + 1);
  return Series(std::move(c));
}

void BM_Mul(benchmark::State& state) {
  const Series a = test_series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mul(a, a));
}

void BM_MulSerial(benchmark::State& state) {
  const Series a = test_series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mul_serial(a, a));
}

void BM_UniformizedRow(benchmark::State& state) {
  const TruncatedGenerator gen =
      build_generator(OffspringLaw::canonical(0.5, 1.0), nullptr, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(uniformized_row(gen, 1, 10.0));
}

void BM_UniformizedRowSerial(benchmark::State& state) {
  const TruncatedGenerator gen =
      build_generator(OffspringLaw::canonical(0.5, 1.0), nullptr, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(uniformized_row_serial(gen, 1, 10.0));
}

SimConfig sim_config(std::size_t replicas) {
  SimConfig cfg;
  cfg.grid = {1.0, 10.0};
  cfg.replicas = replicas;
  cfg.seed = 1;
  cfg.cap = 10000;
  return cfg;
}

void BM_SimulateMbs(benchmark::State& state) {
  const OffspringLaw f = OffspringLaw::canonical(0.5, 1.0);
  const SimConfig cfg = sim_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_mbs(f, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SimulateMbsSerial(benchmark::State& state) {
  const OffspringLaw f = OffspringLaw::canonical(0.5, 1.0);
  const SimConfig cfg = sim_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_mbs_serial(f, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Mul)->Arg(256)->Arg(1024);
BENCHMARK(BM_MulSerial)->Arg(256)->Arg(1024);
BENCHMARK(BM_UniformizedRow)->Arg(200)->Arg(400);
BENCHMARK(BM_UniformizedRowSerial)->Arg(200)->Arg(400);
BENCHMARK(BM_SimulateMbs)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateMbsSerial)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
