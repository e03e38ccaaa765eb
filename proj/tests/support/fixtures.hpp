// SPDX-License-Identifier: Apache-2.0
#pragma once

// Hand-built sequences and seeded scenario suites shared by the unit and
// acceptance tests.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kptrack/core_model.hpp"
#include "kptrack/synth.hpp"

namespace kptrack::testing {

/// Template person with head top at (cx, top); carries a head box and, when
/// given, a track id.
Detection person(double cx, double top, double height, std::optional<TrackId> id = std::nullopt,
                 double score = 1.0);

/// Person without pose whose box is exactly `box`.
Detection box_only(const Box& box, std::optional<TrackId> id = std::nullopt);

/// One frame per entry, frame_index = position, all labeled.
VideoSequence make_sequence(std::vector<std::vector<Detection>> frames, std::string video_id = "fixture");

/// Ground truth as a tracker would emit it: no head boxes, the given ids.
VideoSequence as_prediction(const VideoSequence& gt);

struct MotFixture {
    VideoSequence gt;
    VideoSequence pred;
};

/// One person over three labeled frames, predicted exactly with one id.
MotFixture mot_perfect();
/// As mot_perfect, but the predicted id changes on the third frame.
MotFixture mot_id_switch();
/// As mot_perfect, plus two far-away false positives in every frame.
MotFixture mot_fp_heavy();

/// One box drifting 2 px/frame, present in frames {0, 1, 3, 4}.
VideoSequence gap_fixture();

/// Default noise with occlusions and extra false positives.
ScenarioConfig noisy_suite(std::uint64_t seed);
/// Detector-like score model for the threshold sweep: true persons score
/// in [0.93, 1], frequent false positives in [0.3, 0.94].
ScenarioConfig threshold_suite(std::uint64_t seed);
/// Zero-noise scenes with varying actor count and motion.
ScenarioConfig closure_suite(std::uint64_t seed);

std::set<TrackId> distinct_ids(const VideoSequence& seq);
std::vector<std::optional<TrackId>> id_list(const VideoSequence& seq);

} // namespace kptrack::testing
