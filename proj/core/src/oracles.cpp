// SPDX-License-Identifier: Apache-2.0
#include "kptrack/oracles.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_map>

#include "kptrack/assignment.hpp"
#include "kptrack/similarity.hpp"

namespace kptrack {

std::string_view to_string(OracleMode mode)
{
    switch (mode) {
    case OracleMode::perfect_association: return "perfect_association";
    case OracleMode::perfect_keypoints: return "perfect_keypoints";
    case OracleMode::both: return "both";
    }
    return "unknown";
}

OracleMode parse_oracle_mode(std::string_view name)
{
    if (name == "assoc" || name == "perfect_association")
        return OracleMode::perfect_association;
    if (name == "kpts" || name == "perfect_keypoints")
        return OracleMode::perfect_keypoints;
    if (name == "both")
        return OracleMode::both;
    throw ValidationError("unknown oracle mode \"" + std::string(name) + "\"");
}

namespace {

std::unordered_map<std::int64_t, const Frame*> index_frames(const VideoSequence& seq)
{
    std::unordered_map<std::int64_t, const Frame*> out;
    for (const Frame& f : seq.frames)
        out.emplace(f.frame_index, &f);
    return out;
}

} // namespace

VideoSequence perfect_association(const VideoSequence& gt, const VideoSequence& pred, double alpha)
{
    VideoSequence out = pred;
    const auto gt_frames = index_frames(gt);

    TrackId max_gt = -1;
    for (const Frame& f : gt.frames)
        for (const Detection& d : f.detections)
            if (d.track_id)
                max_gt = std::max(max_gt, *d.track_id);
    const TrackId offset = max_gt + 1;

    // Pass 1: overwrite matched ids, remember which detections were not.
    std::vector<std::vector<char>> overwritten(out.frames.size());
    std::set<TrackId> leftover_ids;
    for (std::size_t f = 0; f < out.frames.size(); ++f) {
        Frame& frame = out.frames[f];
        overwritten[f].assign(frame.detections.size(), 0);
        auto it = gt_frames.find(frame.frame_index);
        if (it != gt_frames.end() && it->second->labeled) {
            const auto& gts = it->second->detections;
            const PoseMatchResult match = match_poses_frame(gts, frame.detections, alpha);
            for (auto [gi, pi] : match.pairs) {
                frame.detections[pi].track_id = gts[gi].track_id;
                overwritten[f][pi] = 1;
            }
        }
        for (std::size_t d = 0; d < frame.detections.size(); ++d)
            if (!overwritten[f][d] && frame.detections[d].track_id)
                leftover_ids.insert(*frame.detections[d].track_id);
    }

    // Pass 2: dense relabeling of the rest above the GT id range.
    std::map<TrackId, TrackId> relabel;
    TrackId next = offset;
    for (TrackId id : leftover_ids)
        relabel[id] = next++;
    for (std::size_t f = 0; f < out.frames.size(); ++f)
        for (std::size_t d = 0; d < out.frames[f].detections.size(); ++d) {
            Detection& det = out.frames[f].detections[d];
            if (!overwritten[f][d] && det.track_id)
                det.track_id = relabel.at(*det.track_id);
        }
    return out;
}

VideoSequence perfect_keypoints(const VideoSequence& gt, const VideoSequence& pred)
{
    VideoSequence out = pred;
    const auto gt_frames = index_frames(gt);
    for (Frame& frame : out.frames) {
        auto it = gt_frames.find(frame.frame_index);
        if (it == gt_frames.end() || !it->second->labeled)
            continue;
        const auto& gts = it->second->detections;
        if (gts.empty() || frame.detections.empty())
            continue;

        Matrix overlap(gts.size(), frame.detections.size());
        for (std::size_t g = 0; g < gts.size(); ++g)
            for (std::size_t p = 0; p < frame.detections.size(); ++p)
                overlap(g, p) = iou(gts[g].box, frame.detections[p].box);
        const CostMatrix m = CostMatrix::from_similarity(std::move(overlap));
        for (auto [g, p] : hungarian_assign(m).pairs) {
            if (!(m.similarity(g, p) > 0.0))
                continue;
            Pose pose = gts[g].pose;
            for (Keypoint& k : pose.joints)
                if (k.present)
                    k.score = 1.0;
            frame.detections[p].pose = std::move(pose);
        }
    }
    return out;
}

VideoSequence apply_oracle(const VideoSequence& gt, const VideoSequence& pred, OracleMode mode, double alpha,
                           OracleOrder order)
{
    switch (mode) {
    case OracleMode::perfect_association:
        return perfect_association(gt, pred, alpha);
    case OracleMode::perfect_keypoints:
        return perfect_keypoints(gt, pred);
    case OracleMode::both:
        if (order == OracleOrder::association_first)
            return perfect_keypoints(gt, perfect_association(gt, pred, alpha));
        return perfect_association(gt, perfect_keypoints(gt, pred), alpha);
    }
    return pred;
}

} // namespace kptrack
