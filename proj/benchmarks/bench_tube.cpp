// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "kptrack/rng.hpp"
#include "kptrack/tube_geometry.hpp"

namespace {

using namespace kptrack::tube;

void BM_RoiAlign(benchmark::State& state)
{
    const auto t_len = static_cast<std::size_t>(state.range(0));
    kptrack::Rng rng(3);
    FeatureVolume vol{Tensor({t_len, 64, 48, 80}), 16.0};
    for (double& v : vol.data.data())
        v = rng.uniform(-1.0, 1.0);
    Tube tube;
    for (std::size_t t = 0; t < t_len; ++t)
        tube.boxes.push_back(kptrack::Box{100.0 + 4.0 * t, 80.0, 260.0 + 4.0 * t, 400.0});
    for (auto _ : state)
        benchmark::DoNotOptimize(spatiotemporal_roi_align(vol, tube, 7, 2));
}
BENCHMARK(BM_RoiAlign)->Arg(1)->Arg(3)->Arg(8);

void BM_GenerateAnchors(benchmark::State& state)
{
    const AnchorGrid grid;
    for (auto _ : state)
        benchmark::DoNotOptimize(generate_anchors(grid, 1280, 720, 3));
}
BENCHMARK(BM_GenerateAnchors)->Unit(benchmark::kMillisecond);

void BM_DeltaRoundTrip(benchmark::State& state)
{
    const TubeAnchor anchor{kptrack::Box{100, 100, 164, 228}, 8};
    Tube target;
    for (int t = 0; t < 8; ++t)
        target.boxes.push_back(kptrack::Box{102.0 + t, 98.0, 170.0 + t, 230.0});
    for (auto _ : state)
        benchmark::DoNotOptimize(decode_tube_deltas(encode_tube_deltas(target, anchor), anchor));
}
BENCHMARK(BM_DeltaRoundTrip);

} // namespace
