#include <benchmark/benchmark.h>

#include <random>

#include "lcm/fixtures.hpp"
#include "lcm/identifiability.hpp"
#include "lcm/lab.hpp"
#include "lcm/modular.hpp"
#include "lcm/singular.hpp"

using namespace lcmid;

namespace {

const Model& model_for(std::int64_t id) {
    static const std::vector<Model> models{fig2_model(), fig3_model(), fig5_model(), cycle_model(6, {1})};
    return models.at(static_cast<std::size_t>(id));
}

void BM_IoEquation(benchmark::State& state) {
    const Model& m = model_for(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(coefficient_map(m));
}
BENCHMARK(BM_IoEquation)->DenseRange(0, 3);

void BM_JacobianDeterminant(benchmark::State& state) {
    const auto j = jacobian(coefficient_map(model_for(state.range(0)))).entries;
    for (auto _ : state) benchmark::DoNotOptimize(det_fraction_free(j));
}
BENCHMARK(BM_JacobianDeterminant)->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_GenericRank(benchmark::State& state) {
    const auto j = jacobian(coefficient_map(model_for(state.range(0)))).entries;
    for (auto _ : state) benchmark::DoNotOptimize(generic_rank(j, 5, 1));
}
BENCHMARK(BM_GenericRank)->DenseRange(0, 3);

void BM_SymbolicRank(benchmark::State& state) {
    const auto j = jacobian(coefficient_map(apply(fig3_model(), Mutation::remove_edge(1, 4)))).entries;
    for (auto _ : state) benchmark::DoNotOptimize(symbolic_rank(j));
}
BENCHMARK(BM_SymbolicRank)->Unit(benchmark::kMillisecond);

void BM_RankModP(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const std::uint64_t p = kWordPrimes[0];
    std::mt19937_64 rng(7);
    std::vector<std::uint64_t> a(n * n);
    for (auto& x : a) x = rng() % p;
    for (auto _ : state) benchmark::DoNotOptimize(rank_mod_p(a, n, n, p));
}
BENCHMARK(BM_RankModP)->RangeMultiplier(2)->Range(8, 64);

void BM_Decide(benchmark::State& state) {
    const Model& m = model_for(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(decide(m));
}
BENCHMARK(BM_Decide)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

void BM_EnumerateN4(benchmark::State& state) {
    ScanSpec s;
    s.max_n = 4;
    s.leak_budget = 0;
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_models(s).size());
}
BENCHMARK(BM_EnumerateN4)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
