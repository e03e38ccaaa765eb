// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "kptrack/linker.hpp"
#include "kptrack/metrics.hpp"
#include "kptrack/synth.hpp"

namespace {

kptrack::VideoSequence scene(std::size_t frames, std::size_t actors)
{
    kptrack::ScenarioConfig cfg;
    cfg.frames = frames;
    cfg.actors = actors;
    return kptrack::corrupt_to_predictions(kptrack::generate_ground_truth(cfg), cfg);
}

void BM_TrackVideo(benchmark::State& state)
{
    const kptrack::VideoSequence pred = scene(static_cast<std::size_t>(state.range(0)), 10);
    kptrack::LinkerConfig cfg;
    cfg.criterion.kind = static_cast<kptrack::SimilarityKind>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(kptrack::track_video(pred, cfg));
    state.SetComplexityN(state.range(0));
    state.SetLabel(std::string(kptrack::to_string(cfg.criterion.kind)));
}
BENCHMARK(BM_TrackVideo)
    ->ArgsProduct({{100, 200, 400}, {static_cast<long>(kptrack::SimilarityKind::bbox_iou),
                                     static_cast<long>(kptrack::SimilarityKind::pose_pckh),
                                     static_cast<long>(kptrack::SimilarityKind::feature_cosine)}})
    ->Unit(benchmark::kMillisecond);

void BM_TrackVideoLookback(benchmark::State& state)
{
    const kptrack::VideoSequence pred = scene(200, 10);
    kptrack::LinkerConfig cfg;
    cfg.lookback = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(kptrack::track_video(pred, cfg));
}
BENCHMARK(BM_TrackVideoLookback)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state)
{
    kptrack::ScenarioConfig cfg;
    cfg.frames = static_cast<std::size_t>(state.range(0));
    cfg.actors = 10;
    const kptrack::VideoSequence gt = kptrack::generate_ground_truth(cfg);
    const kptrack::VideoSequence tracked =
        kptrack::track_video(kptrack::corrupt_to_predictions(gt, cfg), kptrack::LinkerConfig{});
    for (auto _ : state)
        benchmark::DoNotOptimize(kptrack::evaluate(gt, tracked));
}
BENCHMARK(BM_Evaluate)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

} // namespace
