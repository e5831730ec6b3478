#include <benchmark/benchmark.h>

#include <omp.h>

#include "mtd/sim.hpp"

namespace {

mtd::ExperimentSpec reference(mtd::PolicyKind policy, std::size_t trials) {
  mtd::ExperimentSpec s;
  s.config = mtd::make_config(50, 20, 20, 100);
  for (auto& c : s.config.attack_cost) c = 0.3;
  s.policy = policy;
  s.trials = trials;
  s.seed = 1;
  s.eta = mtd::EtaSchedule::fixed(10.0);
  return s;
}

void BM_TrialsSerial(benchmark::State& state) {
  const auto spec = reference(static_cast<mtd::PolicyKind>(state.range(0)), 64);
  for (auto _ : state) benchmark::DoNotOptimize(mtd::run_experiment_serial(spec));
  state.SetItemsProcessed(state.iterations() * 64);
}

void BM_TrialsParallel(benchmark::State& state) {
  const auto spec = reference(static_cast<mtd::PolicyKind>(state.range(0)), 64);
  for (auto _ : state) benchmark::DoNotOptimize(mtd::run_experiment(spec));
  state.SetItemsProcessed(state.iterations() * 64);
  state.counters["threads"] = omp_get_max_threads();
}

void BM_CesDecision(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto config = mtd::make_config(n, 20, std::max<std::size_t>(1, n / 2), 100);
  mtd::RandomSource rng(7);
  const auto a = mtd::random_initial_assignment(config, rng);
  mtd::Observation o = mtd::Observation::clear(n);
  for (std::size_t v = 0; v < n; v += 5) o.flagged[v] = 1;
  const auto online = mtd::draw_online(10.0, config, mtd::EtaSampling::binomial, rng);
  for (auto _ : state) benchmark::DoNotOptimize(mtd::ces_decide(o, a, online, 1, config, rng));
}

constexpr int kCes = static_cast<int>(mtd::PolicyKind::ces);
constexpr int kRrt = static_cast<int>(mtd::PolicyKind::rrt);

}  // namespace

BENCHMARK(BM_TrialsSerial)->Arg(kCes)->Arg(kRrt)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrialsParallel)->Arg(kCes)->Arg(kRrt)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CesDecision)->Arg(10)->Arg(50)->Arg(200)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
