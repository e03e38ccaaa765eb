// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "kptrack/assignment.hpp"
#include "kptrack/rng.hpp"

namespace {

kptrack::Matrix random_cost(std::size_t n, std::uint64_t seed)
{
    kptrack::Rng rng(seed);
    kptrack::Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = rng.uniform(-1.0, 0.0);
    return m;
}

void BM_Hungarian(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const kptrack::Matrix cost = random_cost(n, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(kptrack::hungarian_assign(cost));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hungarian)->RangeMultiplier(2)->Range(4, 128)->Complexity(benchmark::oNCubed);

void BM_Greedy(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const kptrack::Matrix cost = random_cost(n, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(kptrack::greedy_assign(cost));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Greedy)->RangeMultiplier(2)->Range(4, 128)->Complexity();

} // namespace
