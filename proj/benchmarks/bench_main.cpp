#include <benchmark/benchmark.h>

#include "piggybank/classical.hpp"
#include "piggybank/protocol.hpp"
#include "piggybank/tomography.hpp"

using namespace piggybank;

static void BM_EstimateAngle(benchmark::State& state) {
  const auto photons = static_cast<std::size_t>(state.range(0));
  const PhotonBatch batch = make_batch(Stage::CoverReturn, linear_state(Angle(0.7)), photons);
  Rng rng(1);
  for (auto _ : state) {
    PhotonBatch copy = batch;
    benchmark::DoNotOptimize(estimate_angle(std::move(copy), rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateAngle)->RangeMultiplier(4)->Range(64, 4096);

static void BM_RunSession(benchmark::State& state) {
  SessionConfig c;
  c.n_cover = static_cast<std::size_t>(state.range(0));
  c.message_bits.assign(16, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_session(c));
    ++c.seed;
  }
}
BENCHMARK(BM_RunSession)->Arg(256)->Arg(4096);

static void BM_Forward(benchmark::State& state) {
  const auto keys = classical::keys_from_exponents(522617, 5, 416861);
  classical::BigInt x = 1201;
  for (auto _ : state) {
    x = classical::forward(x, keys);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_Forward);

BENCHMARK_MAIN();
