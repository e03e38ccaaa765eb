// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file linker.hpp
/// \brief Frame-to-frame bipartite linking of detections into tracks.
///
/// Each detection is a node; edges join the current frame to the live tracks
/// and cost the negated similarity. Tracks start on the first frame, matched
/// detections inherit the track id of their partner, and any detection left
/// unmatched opens a new track. With lookback K > 1 a track stays matchable
/// for K frames after it was last seen, which bridges short gaps at a cost
/// linear in K.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "kptrack/assignment.hpp"
#include "kptrack/core_model.hpp"
#include "kptrack/similarity.hpp"

namespace kptrack {

enum class MatchAlgorithm { hungarian, greedy, random };

std::string_view to_string(MatchAlgorithm algo);
MatchAlgorithm parse_match_algorithm(std::string_view name);

struct LinkerConfig {
    MatchAlgorithm algorithm = MatchAlgorithm::hungarian;
    SimilarityCriterion criterion;
    /// A match links only if its similarity is strictly greater.
    double min_similarity = 0.0;
    /// Number of past frames whose tracks stay matchable. Must be >= 1.
    int lookback = 1;
    /// Random mode draws ids uniformly from [0, random_max_id].
    std::int64_t random_max_id = 1000;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

struct LinkResult {
    std::vector<Detection> detections;
    TrackId next_id = 0;
    /// Cost of the full assignment before the min_similarity floor.
    double assignment_cost = 0.0;
    std::size_t linked = 0;
};

/// Links `curr` against `prev` (which must all carry track ids). Unmatched
/// detections get consecutive ids from `next_id` in detection order.
LinkResult link_frame_pair(std::span<const Detection> prev, std::span<const Detection> curr,
                           const LinkerConfig& cfg, TrackId next_id, const MatchContext* context = nullptr);

struct TrackStats {
    /// Sum over frames of the chosen assignment's total cost.
    double assignment_cost = 0.0;
    std::size_t links = 0;
    std::size_t tracks = 0;
};

/// Assigns a track id to every detection of `seq`. Deterministic given
/// (seq, cfg), including random mode.
VideoSequence track_video(const VideoSequence& seq, const LinkerConfig& cfg, TrackStats* stats = nullptr);

} // namespace kptrack
