#include <benchmark/benchmark.h>

#include "npir/bounds.hpp"
#include "npir/channels.hpp"
#include "npir/engine.hpp"
#include "npir/gf2.hpp"
#include "npir/numerics.hpp"
#include "npir/privacy.hpp"
#include "npir/scheme.hpp"

using namespace npir;

static void BM_upper_bound_bsc_pair(benchmark::State& state) {
  CapacityVector C(std::vector<double>{1.0 - binary_entropy(0.1), 1.0 - binary_entropy(0.2)});
  for (auto _ : state) benchmark::DoNotOptimize(upper_bound(3, 2, C));
}
BENCHMARK(BM_upper_bound_bsc_pair);

static void BM_upper_bound_m4_n4(benchmark::State& state) {
  CapacityVector C(std::vector<double>{0.9, 0.7, 0.5, 0.3});
  for (auto _ : state) benchmark::DoNotOptimize(upper_bound(4, 4, C));
}
BENCHMARK(BM_upper_bound_m4_n4);

static void BM_lower_bound_m4_n4(benchmark::State& state) {
  CapacityVector C(std::vector<double>{0.9, 0.7, 0.5, 0.3});
  for (auto _ : state) benchmark::DoNotOptimize(lower_bound(4, 4, C));
}
BENCHMARK(BM_lower_bound_m4_n4);

static void BM_stage_recursion(benchmark::State& state) {
  GroupSequence seq{{1, 2, 3, 3, 4, 4}};
  for (auto _ : state) benchmark::DoNotOptimize(corner_point(seq, 6));
}
BENCHMARK(BM_stage_recursion);

static void BM_plan_synthesis(benchmark::State& state) {
  RngStream rng(1);
  for (auto _ : state) {
    RngStream r = rng.split(1);
    benchmark::DoNotOptimize(synthesize_query_plan(3, 3, GroupSequence{{1, 2, 3}}, 1, 4, r));
  }
}
BENCHMARK(BM_plan_synthesis);

static void BM_nearest_codeword_decode(benchmark::State& state) {
  RngStream rng(2);
  LinearCode code = random_linear_code(40, static_cast<int>(state.range(0)), rng);
  std::vector<std::uint8_t> y(40, 0);
  for (int i = 0; i < 40; i += 3) y[static_cast<std::size_t>(i)] = 1;
  for (auto _ : state) benchmark::DoNotOptimize(nearest_codeword_decode(code, y));
}
BENCHMARK(BM_nearest_codeword_decode)->Arg(12)->Arg(16)->Arg(20);

static void BM_bsc_transmit_4096(benchmark::State& state) {
  PointChannel ch = PointChannel::bsc(0.1);
  std::vector<std::uint8_t> x(4096, 1);
  RngStream rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(transmit_point(ch, x, rng));
}
BENCHMARK(BM_bsc_transmit_4096);

static void BM_blahut_arimoto_4x4(benchmark::State& state) {
  std::vector<std::vector<double>> tbl = {{0.7, 0.1, 0.1, 0.1},
                                          {0.1, 0.7, 0.1, 0.1},
                                          {0.1, 0.1, 0.7, 0.1},
                                          {0.25, 0.25, 0.25, 0.25}};
  for (auto _ : state) benchmark::DoNotOptimize(dmc_capacity(tbl));
}
BENCHMARK(BM_blahut_arimoto_4x4);

static void BM_privacy_enumeration(benchmark::State& state) {
  GroupSequence seq{{1, 2, 2}};
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_query_distribution(3, 2, seq, 0, 1));
}
BENCHMARK(BM_privacy_enumeration);

static void BM_noiseless_session(benchmark::State& state) {
  SessionConfig cfg;
  cfg.M = 3;
  cfg.N = 2;
  cfg.channels = {PointChannel::bsc(0.0), PointChannel::bsc(0.0)};
  cfg.nu = 4;
  cfg.margin = 0.0;
  RngStream rng(4);
  MessageStore store = MessageStore::random(3, 16, rng);
  for (auto _ : state) benchmark::DoNotOptimize(run_npir_session(cfg, store, 2));
}
BENCHMARK(BM_noiseless_session);

BENCHMARK_MAIN();
