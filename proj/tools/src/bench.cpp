// SPDX-License-Identifier: Apache-2.0
#include "kptrack_tools/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "kptrack/synth.hpp"

namespace kptrack::cli {

LinearFit fit_line(std::span<const double> xs, std::span<const double> ys)
{
    if (xs.size() != ys.size() || xs.size() < 2)
        throw ValidationError("linear fit needs at least two points");
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (!(sxx > 0.0))
        throw ValidationError("linear fit needs two distinct x values");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

namespace {

constexpr double kMinBatchSeconds = 0.02;

double time_once(const VideoSequence& seq, const LinkerConfig& cfg, int iterations)
{
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < iterations; ++i) {
        VideoSequence out = track_video(seq, cfg);
        if (out.frames.size() != seq.frames.size())
            throw Error("tracking dropped frames");
    }
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / iterations;
}

} // namespace

BenchResult bench_tracking(std::span<const std::size_t> frame_counts, std::size_t actors, std::uint64_t seed,
                           int repeats, const LinkerConfig& cfg)
{
    if (repeats < 1)
        throw ValidationError("repeats must be at least 1");
    std::vector<VideoSequence> scenes;
    std::vector<int> iterations;
    for (std::size_t frames : frame_counts) {
        ScenarioConfig scenario;
        scenario.seed = seed;
        scenario.frames = frames;
        scenario.actors = actors;
        scenes.push_back(corrupt_to_predictions(generate_ground_truth(scenario), scenario));
        // Batch short runs so that timer resolution does not dominate.
        const double first = time_once(scenes.back(), cfg, 1);
        iterations.push_back(
            std::max(1, static_cast<int>(std::min(1e6, std::ceil(kMinBatchSeconds / std::max(first, 1e-9))))));
    }

    // Rounds visit every size in turn so that slow drifts of the machine
    // affect all sizes alike.
    std::vector<double> best(scenes.size(), std::numeric_limits<double>::infinity());
    for (int r = 0; r < repeats; ++r)
        for (std::size_t i = 0; i < scenes.size(); ++i)
            best[i] = std::min(best[i], time_once(scenes[i], cfg, iterations[i]));

    BenchResult result;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < scenes.size(); ++i) {
        result.points.push_back({frame_counts[i], best[i]});
        xs.push_back(static_cast<double>(frame_counts[i]));
        ys.push_back(best[i]);
    }
    if (xs.size() >= 2)
        result.fit = fit_line(xs, ys);
    return result;
}

} // namespace kptrack::cli
