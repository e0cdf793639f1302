#include <benchmark/benchmark.h>

#include "drpid/engine.hpp"
#include "drpid/metrics.hpp"
#include "drpid/predictor.hpp"

using namespace drpid;

namespace {

ScenarioConfig bench_config() {
  ScenarioConfig cfg;
  cfg.ref.filter_tc = 0.8;
  cfg.seed = 1;
  return cfg;
}

void BM_DiscretizeZoh(benchmark::State& state) {
  const ContinuousPlant plant{6.3, 17.7};
  double h = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(discretize_zoh(plant, h));
    h = h == 0.01 ? 0.1 : 0.01;
  }
}
BENCHMARK(BM_DiscretizeZoh);

void BM_BuildPacket(benchmark::State& state) {
  CascadeConfig cfg;
  cfg.design.k_pd = cfg.design.kp;
  cfg.model_t = discretize_zoh(ContinuousPlant{6.3, 17.7}, 0.01);
  cfg.m_horizon = 3;
  CascadeInputs in;
  in.k = 10;
  in.u_pi_current = 0.3;
  in.y_current = 0.02;
  in.x_current = {0.02, 0.1};
  in.reference_window = {0.02, 0.03, 0.035, 0.04};
  PredictorState st;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_packet(in, st, cfg));
  }
}
BENCHMARK(BM_BuildPacket);

void BM_Run30s(benchmark::State& state) {
  const ScenarioConfig cfg = bench_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(cfg));
  }
}
BENCHMARK(BM_Run30s);

void BM_FourVariantComparison(benchmark::State& state) {
  const ScenarioConfig cfg = bench_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_comparison(cfg));
  }
}
BENCHMARK(BM_FourVariantComparison);

}  // namespace

BENCHMARK_MAIN();
