// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <limits>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "kptrack/linker.hpp"
#include "kptrack/rng.hpp"

using namespace kptrack;
using namespace kptrack::testing;

namespace {

Detection at(double x, double y, double w = 50, double h = 100, std::optional<TrackId> id = std::nullopt)
{
    return box_only(Box{x, y, x + w, y + h}, id);
}

// First-appearance order must be 0, 1, 2, ... and no id may repeat within
// a frame.
void expect_contiguous_ids(const VideoSequence& seq)
{
    TrackId next = 0;
    std::set<TrackId> seen;
    for (const Frame& f : seq.frames) {
        std::set<TrackId> in_frame;
        for (const Detection& d : f.detections) {
            ASSERT_TRUE(d.track_id.has_value());
            EXPECT_TRUE(in_frame.insert(*d.track_id).second);
            if (seen.insert(*d.track_id).second) {
                EXPECT_EQ(*d.track_id, next++);
            }
        }
    }
}

} // namespace

TEST(LinkFramePair, SingleObviousMatch)
{
    const std::vector<Detection> prev{at(0, 0, 100, 100, 7)};
    const std::vector<Detection> curr{at(5, 0, 100, 100)};
    const LinkResult r = link_frame_pair(prev, curr, LinkerConfig{}, 8);
    EXPECT_EQ(r.detections[0].track_id, 7);
    EXPECT_EQ(r.next_id, 8);
    EXPECT_EQ(r.linked, 1u);
}

TEST(LinkFramePair, ZeroSimilarityNeverLinks)
{
    const std::vector<Detection> prev{at(0, 0, 10, 10, 0)};
    const std::vector<Detection> curr{at(100, 100, 10, 10)};
    const LinkResult r = link_frame_pair(prev, curr, LinkerConfig{}, 1);
    EXPECT_EQ(r.detections[0].track_id, 1);
    EXPECT_EQ(r.next_id, 2);
}

TEST(LinkFramePair, MinSimilarityIsExclusive)
{
    // IoU of these boxes is exactly 1/3.
    const std::vector<Detection> prev{at(0, 0, 100, 100, 0)};
    const std::vector<Detection> curr{at(50, 0, 100, 100)};
    LinkerConfig cfg;
    cfg.min_similarity = 1.0 / 3.0;
    EXPECT_EQ(link_frame_pair(prev, curr, cfg, 1).detections[0].track_id, 1);
    cfg.min_similarity = 0.3;
    EXPECT_EQ(link_frame_pair(prev, curr, cfg, 1).detections[0].track_id, 0);
}

TEST(LinkFramePair, UnmatchedGetsNextId)
{
    // IoU matrix (rows prev 0,1; cols curr 0..2):
    //   prev0 overlaps curr1 heavily, prev1 overlaps curr2, curr0 is alone.
    const std::vector<Detection> prev{at(100, 0, 50, 100, 0), at(300, 0, 50, 100, 1)};
    const std::vector<Detection> curr{at(600, 0, 50, 100), at(104, 0, 50, 100), at(296, 0, 50, 100)};
    const LinkResult r = link_frame_pair(prev, curr, LinkerConfig{}, 2);
    EXPECT_EQ(r.detections[0].track_id, 2);
    EXPECT_EQ(r.detections[1].track_id, 0);
    EXPECT_EQ(r.detections[2].track_id, 1);
    EXPECT_EQ(r.next_id, 3);
}

TEST(LinkFramePair, NewIdsFollowDetectionOrder)
{
    const std::vector<Detection> prev;
    const std::vector<Detection> curr{at(0, 0), at(200, 0), at(400, 0)};
    const LinkResult r = link_frame_pair(prev, curr, LinkerConfig{}, 10);
    EXPECT_EQ(r.detections[0].track_id, 10);
    EXPECT_EQ(r.detections[1].track_id, 11);
    EXPECT_EQ(r.detections[2].track_id, 12);
}

TEST(LinkFramePair, PreviousWithoutIdsThrows)
{
    const std::vector<Detection> prev{at(0, 0)};
    const std::vector<Detection> curr{at(0, 0)};
    EXPECT_THROW(link_frame_pair(prev, curr, LinkerConfig{}, 0), ValidationError);
}

TEST(LinkerConfig, LookbackMustBePositive)
{
    LinkerConfig cfg;
    cfg.lookback = 0;
    EXPECT_THROW(cfg.validate(), ValidationError);
    EXPECT_THROW(track_video(make_sequence({}), cfg), ValidationError);
}

TEST(MatchAlgorithm, Parse)
{
    EXPECT_EQ(parse_match_algorithm("hungarian"), MatchAlgorithm::hungarian);
    EXPECT_EQ(parse_match_algorithm("greedy"), MatchAlgorithm::greedy);
    EXPECT_EQ(parse_match_algorithm("random"), MatchAlgorithm::random);
    EXPECT_THROW(parse_match_algorithm("auction"), ValidationError);
}

TEST(TrackVideo, DriftingBoxKeepsOneId)
{
    std::vector<std::vector<Detection>> frames;
    for (int t = 0; t < 5; ++t)
        frames.push_back({at(100 + 2 * t, 100)});
    const VideoSequence out = track_video(make_sequence(frames), LinkerConfig{});
    for (const Frame& f : out.frames)
        EXPECT_EQ(f.detections[0].track_id, 0);
}

TEST(TrackVideo, GapNeedsLookbackTwo)
{
    const VideoSequence seq = gap_fixture();
    LinkerConfig cfg;
    EXPECT_EQ(distinct_ids(track_video(seq, cfg)).size(), 2u);
    cfg.lookback = 2;
    const VideoSequence out = track_video(seq, cfg);
    EXPECT_EQ(distinct_ids(out).size(), 1u);
    EXPECT_EQ(out.frames[3].detections[0].track_id, 0);
}

TEST(TrackVideo, EmptyVideo)
{
    const VideoSequence out = track_video(make_sequence({}), LinkerConfig{});
    EXPECT_TRUE(out.frames.empty());
}

TEST(TrackVideo, OutputKeepsFrameStructure)
{
    const VideoSequence seq = make_sequence({{at(0, 0)}, {}, {at(0, 0), at(300, 0)}});
    const VideoSequence out = track_video(seq, LinkerConfig{});
    ASSERT_EQ(out.frames.size(), 3u);
    EXPECT_TRUE(out.frames[1].detections.empty());
    EXPECT_EQ(out.frames[2].detections.size(), 2u);
}

TEST(TrackVideo, IdsContiguousAndUniquePerFrame)
{
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const ScenarioConfig cfg = noisy_suite(seed);
        const VideoSequence pred = corrupt_to_predictions(generate_ground_truth(cfg), cfg);
        for (MatchAlgorithm algo : {MatchAlgorithm::hungarian, MatchAlgorithm::greedy}) {
            for (int k : {1, 3}) {
                LinkerConfig lc;
                lc.algorithm = algo;
                lc.lookback = k;
                TrackStats stats;
                const VideoSequence out = track_video(pred, lc, &stats);
                expect_contiguous_ids(out);
                EXPECT_EQ(stats.tracks, distinct_ids(out).size());
            }
        }
    }
}

TEST(TrackVideo, Deterministic)
{
    const ScenarioConfig cfg = noisy_suite(3);
    const VideoSequence pred = corrupt_to_predictions(generate_ground_truth(cfg), cfg);
    for (MatchAlgorithm algo : {MatchAlgorithm::hungarian, MatchAlgorithm::greedy, MatchAlgorithm::random}) {
        LinkerConfig lc;
        lc.algorithm = algo;
        lc.rng_seed = 7;
        EXPECT_EQ(track_video(pred, lc), track_video(pred, lc));
    }
}

TEST(TrackVideo, RandomModeDrawsWithinRange)
{
    const ScenarioConfig cfg = noisy_suite(2);
    const VideoSequence pred = corrupt_to_predictions(generate_ground_truth(cfg), cfg);
    LinkerConfig lc;
    lc.algorithm = MatchAlgorithm::random;
    lc.random_max_id = 5;
    lc.rng_seed = 1;
    const VideoSequence out = track_video(pred, lc);
    for (const auto& id : id_list(out)) {
        ASSERT_TRUE(id.has_value());
        EXPECT_GE(*id, 0);
        EXPECT_LE(*id, 5);
    }
    lc.rng_seed = 2;
    EXPECT_NE(id_list(track_video(pred, lc)), id_list(out));
}

TEST(TrackVideo, LookbackOneEqualsAdjacentLinking)
{
    const ScenarioConfig cfg = noisy_suite(5);
    const VideoSequence pred = corrupt_to_predictions(generate_ground_truth(cfg), cfg);
    const VideoSequence out = track_video(pred, LinkerConfig{});

    // Re-derive with explicit frame-pair linking.
    TrackId next = 0;
    std::vector<Detection> prev;
    for (std::size_t t = 0; t < pred.frames.size(); ++t) {
        const LinkResult r = link_frame_pair(prev, pred.frames[t].detections, LinkerConfig{}, next);
        next = r.next_id;
        prev = r.detections;
        EXPECT_EQ(r.detections, out.frames[t].detections) << "frame " << t;
    }
}

TEST(TrackVideo, DistinctIdsNonIncreasingInLookback)
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        ScenarioConfig cfg = noisy_suite(seed);
        cfg.occlusion_probability = 0.05;
        cfg.noise.fp_rate = 0.0;
        const VideoSequence pred = filter_detections(corrupt_to_predictions(generate_ground_truth(cfg), cfg), 0.5,
                                                     1.95);
        std::size_t last = std::numeric_limits<std::size_t>::max();
        for (int k = 1; k <= 8; ++k) {
            LinkerConfig lc;
            lc.lookback = k;
            const std::size_t n = distinct_ids(track_video(pred, lc)).size();
            EXPECT_LE(n, last) << "seed " << seed << " K " << k;
            last = n;
        }
    }
}

TEST(TrackVideo, HungarianCostNeverAboveGreedyPerFrame)
{
    const ScenarioConfig cfg = noisy_suite(9);
    const VideoSequence pred = corrupt_to_predictions(generate_ground_truth(cfg), cfg);
    LinkerConfig h, g;
    g.algorithm = MatchAlgorithm::greedy;
    TrackStats sh, sg;
    track_video(pred, h, &sh);
    track_video(pred, g, &sg);
    EXPECT_LE(sh.assignment_cost, sg.assignment_cost);
}

TEST(TrackVideo, MissingFeaturesFailForCosine)
{
    ScenarioConfig cfg = noisy_suite(1);
    cfg.feature_dim = 0;
    const VideoSequence pred = corrupt_to_predictions(generate_ground_truth(cfg), cfg);
    LinkerConfig lc;
    lc.criterion.kind = SimilarityKind::feature_cosine;
    EXPECT_THROW(track_video(pred, lc), ValidationError);
}
