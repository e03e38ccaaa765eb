// SPDX-License-Identifier: Apache-2.0
#include "kptrack/linker.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "kptrack/rng.hpp"

namespace kptrack {

std::string_view to_string(MatchAlgorithm algo)
{
    switch (algo) {
    case MatchAlgorithm::hungarian: return "hungarian";
    case MatchAlgorithm::greedy: return "greedy";
    case MatchAlgorithm::random: return "random";
    }
    return "unknown";
}

MatchAlgorithm parse_match_algorithm(std::string_view name)
{
    if (name == "hungarian")
        return MatchAlgorithm::hungarian;
    if (name == "greedy")
        return MatchAlgorithm::greedy;
    if (name == "random")
        return MatchAlgorithm::random;
    throw ValidationError("unknown matching algorithm \"" + std::string(name) + "\"");
}

void LinkerConfig::validate() const
{
    if (lookback < 1)
        throw ValidationError("lookback must be at least 1");
    if (random_max_id < 0)
        throw ValidationError("random_max_id must be non-negative");
    if (!std::isfinite(min_similarity))
        throw ValidationError("min_similarity must be finite");
    if (algorithm != MatchAlgorithm::random)
        criterion.validate();
}

LinkResult link_frame_pair(std::span<const Detection> prev, std::span<const Detection> curr,
                           const LinkerConfig& cfg, TrackId next_id, const MatchContext* context)
{
    if (cfg.algorithm == MatchAlgorithm::random)
        throw ValidationError("random mode does not link frame pairs");
    for (const Detection& p : prev)
        if (!p.track_id)
            throw ValidationError("previous detections must carry track ids");

    LinkResult out;
    out.detections.assign(curr.begin(), curr.end());
    std::vector<char> matched(curr.size(), 0);

    if (!prev.empty() && !curr.empty()) {
        const CostMatrix m = build_cost_matrix(prev, curr, cfg.criterion, context);
        const Assignment a =
            cfg.algorithm == MatchAlgorithm::hungarian ? hungarian_assign(m) : greedy_assign(m);
        out.assignment_cost = a.total_cost;
        for (auto [i, j] : a.pairs) {
            if (!(m.similarity(i, j) > cfg.min_similarity))
                continue;
            out.detections[j].track_id = prev[i].track_id;
            matched[j] = 1;
            ++out.linked;
        }
    }

    for (std::size_t j = 0; j < out.detections.size(); ++j)
        if (!matched[j])
            out.detections[j].track_id = next_id++;
    out.next_id = next_id;
    return out;
}

namespace {

struct LiveTrack {
    std::size_t last_pos = 0;
    std::int64_t frame_index = 0;
    std::size_t det_index = 0;
    Detection det;
};

VideoSequence track_random(const VideoSequence& seq, const LinkerConfig& cfg, TrackStats* stats)
{
    VideoSequence out = seq;
    Rng rng(cfg.rng_seed);
    for (Frame& frame : out.frames)
        for (Detection& det : frame.detections)
            det.track_id = rng.uniform_int(0, cfg.random_max_id);
    if (stats)
        *stats = TrackStats{};
    return out;
}

} // namespace

VideoSequence track_video(const VideoSequence& seq, const LinkerConfig& cfg, TrackStats* stats)
{
    cfg.validate();
    if (cfg.algorithm == MatchAlgorithm::random)
        return track_random(seq, cfg, stats);

    VideoSequence out;
    out.video_id = seq.video_id;
    out.image_width = seq.image_width;
    out.image_height = seq.image_height;
    out.joint_names = seq.joint_names;
    out.frames.reserve(seq.frames.size());

    TrackStats local;
    std::map<TrackId, LiveTrack> live;
    TrackId next_id = 0;
    const auto lookback = static_cast<std::size_t>(cfg.lookback);

    std::vector<const LiveTrack*> pool;
    std::vector<Detection> pool_dets;
    MatchContext context;

    for (std::size_t t = 0; t < seq.frames.size(); ++t) {
        const Frame& frame = seq.frames[t];

        // One representative per live track: its latest detection. Most
        // recent frame first, then detection order, so that with K = 1 the
        // rows are exactly the previous frame's detections.
        pool.clear();
        for (const auto& [id, track] : live)
            if (track.last_pos + lookback >= t)
                pool.push_back(&track);
        std::sort(pool.begin(), pool.end(), [](const LiveTrack* a, const LiveTrack* b) {
            if (a->last_pos != b->last_pos)
                return a->last_pos > b->last_pos;
            return a->det_index < b->det_index;
        });

        pool_dets.clear();
        context.prev.clear();
        context.curr_frame = frame.frame_index;
        context.adjacent_frame.reset();
        if (t > 0)
            context.adjacent_frame = seq.frames[t - 1].frame_index;
        for (const LiveTrack* track : pool) {
            pool_dets.push_back(track->det);
            context.prev.push_back({track->frame_index, track->det_index});
        }

        LinkResult linked = link_frame_pair(pool_dets, frame.detections, cfg, next_id, &context);
        local.assignment_cost += linked.assignment_cost;
        local.links += linked.linked;
        next_id = linked.next_id;

        for (std::size_t d = 0; d < linked.detections.size(); ++d)
            live[*linked.detections[d].track_id] = LiveTrack{t, frame.frame_index, d, linked.detections[d]};
        std::erase_if(live, [&](const auto& kv) { return kv.second.last_pos + lookback < t + 1; });

        out.frames.push_back(Frame{frame.frame_index, frame.labeled, std::move(linked.detections)});
    }

    local.tracks = static_cast<std::size_t>(next_id);
    if (stats)
        *stats = local;
    return out;
}

} // namespace kptrack
