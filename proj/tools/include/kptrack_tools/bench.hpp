// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kptrack/linker.hpp"

namespace kptrack::cli {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares of ys on xs. Needs at least two distinct xs.
LinearFit fit_line(std::span<const double> xs, std::span<const double> ys);

struct BenchPoint {
    std::size_t frames = 0;
    /// Fastest of the repeated runs.
    double seconds = 0.0;
};

struct BenchResult {
    std::vector<BenchPoint> points;
    LinearFit fit;
};

/// Times track_video on the default noisy scene with `actors` actors for
/// each frame count, keeping the fastest of `repeats` runs.
BenchResult bench_tracking(std::span<const std::size_t> frame_counts, std::size_t actors, std::uint64_t seed,
                           int repeats, const LinkerConfig& cfg = {});

} // namespace kptrack::cli
