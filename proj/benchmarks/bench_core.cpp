#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "dicke/closedform.hpp"
#include "dicke/integrator.hpp"
#include "dicke/rates.hpp"
#include "dicke/specfun.hpp"

namespace {

void BM_GeneratorApplyPure(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  dicke::Generator g(N, dicke::RateFamily::PureExact);
  std::vector<double> p = dicke::pure_inverted_state(N).values, out(g.dim());
  for (auto _ : state) {
    g.apply(p, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.dim()));
}
BENCHMARK(BM_GeneratorApplyPure)->Arg(100)->Arg(1000)->Arg(5000);

void BM_GeneratorApplyLoss(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  dicke::Generator g(N, dicke::RateFamily::LossExact, 0.5);
  std::vector<double> p = dicke::joint_inverted_state(N).values, out(g.dim());
  for (auto _ : state) {
    g.apply(p, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.dim()));
}
BENCHMARK(BM_GeneratorApplyLoss)->Arg(50)->Arg(200)->Arg(500);

void BM_EvolvePure(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  dicke::Generator g(N, dicke::RateFamily::PureExact);
  const auto p0 = dicke::pure_inverted_state(N);
  dicke::SolverConfig cfg;
  cfg.snapshot_times = {std::log(static_cast<double>(N))};
  for (auto _ : state) {
    auto snaps = dicke::evolve(g, p0, cfg);
    benchmark::DoNotOptimize(snaps.data());
  }
}
BENCHMARK(BM_EvolvePure)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_EvalR(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const double tau = std::log(static_cast<double>(N));
  for (auto _ : state) {
    auto r = dicke::eval_R(N, tau);
    benchmark::DoNotOptimize(r.values.data());
  }
}
BENCHMARK(BM_EvalR)->Arg(100)->Arg(1000)->Arg(10000);

void BM_E1Scaled(benchmark::State& state) {
  double z = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dicke::exp_integral_e1_scaled(z));
    z = z < 1e3 ? z * 1.0000001 : 1e-3;
  }
}
BENCHMARK(BM_E1Scaled);

}  // namespace

BENCHMARK_MAIN();
