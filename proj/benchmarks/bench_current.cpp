#include <benchmark/benchmark.h>

#include "qflow/qflow.hpp"

using namespace qflow;

static void BM_OperatorSvd(benchmark::State& state) {
  const Superoperator v = site_major_reorder(channel_to_superop(random_channel(1, 2, 2, 4)));
  for (auto _ : state) benchmark::DoNotOptimize(operator_svd(v));
}
BENCHMARK(BM_OperatorSvd);

static void BM_DenseCurrent(benchmark::State& state) {
  const MpoTensor m = rule_mpo({RuleKind::reset_swap, Side::left, 0.5});
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_current(m).current);
}
BENCHMARK(BM_DenseCurrent)->Unit(benchmark::kMillisecond);

static void BM_FastCurrent(benchmark::State& state) {
  const TwoSiteRule rule = std::get<TwoSiteRule>(make_rule({RuleKind::reset_swap, Side::left, 0.5}));
  const OperatorSvd svd = rule_svd(rule);
  for (auto _ : state) benchmark::DoNotOptimize(information_current_fast(rule.w, svd));
}
BENCHMARK(BM_FastCurrent)->Unit(benchmark::kMillisecond);

static void BM_CjsCurrent(benchmark::State& state) {
  const MpoTensor m = rule_mpo({RuleKind::amplitude_damping, Side::right, 0.5});
  for (auto _ : state) benchmark::DoNotOptimize(cjs_current(m));
}
BENCHMARK(BM_CjsCurrent)->Unit(benchmark::kMillisecond);

static void BM_NetworkMomentsComposed(benchmark::State& state) {
  const MpoTensor m = compose(rule_mpo({RuleKind::reset_swap, Side::left, 0.5}), 2);
  for (auto _ : state) benchmark::DoNotOptimize(network_moments(m));
}
BENCHMARK(BM_NetworkMomentsComposed)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
