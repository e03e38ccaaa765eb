// SPDX-License-Identifier: Apache-2.0
#include "kptrack/core_model.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace kptrack {

std::size_t Pose::present_count() const noexcept
{
    return static_cast<std::size_t>(
        std::count_if(joints.begin(), joints.end(), [](const Keypoint& k) { return k.present; }));
}

bool Box::valid() const noexcept
{
    return std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
           std::isfinite(y_max) && x_min <= x_max && y_min <= y_max;
}

std::size_t VideoSequence::detection_count() const noexcept
{
    std::size_t n = 0;
    for (const auto& f : frames)
        n += f.detections.size();
    return n;
}

const std::vector<std::string>& posetrack_joint_names()
{
    static const std::vector<std::string> names = {
        "right_ankle",   "right_knee",    "right_hip",      "left_hip",   "left_knee",
        "left_ankle",    "right_wrist",   "right_elbow",    "right_shoulder", "left_shoulder",
        "left_elbow",    "left_wrist",    "head_bottom",    "nose",       "head_top",
    };
    return names;
}

namespace {

std::string where(std::size_t frame_pos, std::int64_t frame_index, std::size_t det)
{
    return "frame " + std::to_string(frame_pos) + " (frame_index " + std::to_string(frame_index) +
           "), detection " + std::to_string(det);
}

} // namespace

void validate_sequence(const VideoSequence& seq, SequenceRole role)
{
    const std::size_t joints = seq.joint_count();
    std::optional<std::size_t> feature_dim;
    std::int64_t previous_index = std::numeric_limits<std::int64_t>::min();

    for (std::size_t f = 0; f < seq.frames.size(); ++f) {
        const Frame& frame = seq.frames[f];
        if (frame.frame_index < 0)
            throw ValidationError("negative frame_index at frame " + std::to_string(f));
        if (f > 0 && frame.frame_index <= previous_index)
            throw ValidationError("non-monotone frames: frame_index " + std::to_string(frame.frame_index) +
                                  " follows " + std::to_string(previous_index));
        previous_index = frame.frame_index;

        for (std::size_t d = 0; d < frame.detections.size(); ++d) {
            const Detection& det = frame.detections[d];
            if (!det.box.valid())
                throw ValidationError("invalid bbox at " + where(f, frame.frame_index, d));
            if (!std::isfinite(det.score))
                throw ValidationError("non-finite score at " + where(f, frame.frame_index, d));
            if (det.pose.size() != joints)
                throw ValidationError("joint count mismatch at " + where(f, frame.frame_index, d) +
                                      ": expected " + std::to_string(joints) + ", got " +
                                      std::to_string(det.pose.size()));
            for (const Keypoint& k : det.pose.joints) {
                if (!std::isfinite(k.x) || !std::isfinite(k.y) || !std::isfinite(k.score))
                    throw ValidationError("non-finite keypoint at " + where(f, frame.frame_index, d));
            }
            if (det.feature) {
                if (!feature_dim)
                    feature_dim = det.feature->size();
                else if (*feature_dim != det.feature->size())
                    throw ValidationError("feature dimension mismatch at " + where(f, frame.frame_index, d));
                for (double v : *det.feature)
                    if (!std::isfinite(v))
                        throw ValidationError("non-finite feature at " + where(f, frame.frame_index, d));
            }
            if (det.track_id && *det.track_id < 0)
                throw ValidationError("negative track_id at " + where(f, frame.frame_index, d));
            if (det.head_box && !det.head_box->valid())
                throw ValidationError("invalid head_box at " + where(f, frame.frame_index, d));
            if (role == SequenceRole::groundtruth) {
                if (!det.track_id)
                    throw ValidationError("ground truth person without track_id at " +
                                          where(f, frame.frame_index, d));
                if (!det.head_box)
                    throw ValidationError("ground truth person without head_box at " +
                                          where(f, frame.frame_index, d));
            }
        }
    }
}

Box derive_box_from_pose(const Pose& pose, double dilation)
{
    Box box{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    bool any = false;
    for (const Keypoint& k : pose.joints) {
        if (!k.present)
            continue;
        any = true;
        box.x_min = std::min(box.x_min, k.x);
        box.y_min = std::min(box.y_min, k.y);
        box.x_max = std::max(box.x_max, k.x);
        box.y_max = std::max(box.y_max, k.y);
    }
    if (!any)
        throw ValidationError("cannot derive a box from a pose with no present joints");

    const double grow_x = 0.5 * dilation * box.width();
    const double grow_y = 0.5 * dilation * box.height();
    box.x_min -= grow_x;
    box.x_max += grow_x;
    box.y_min -= grow_y;
    box.y_max += grow_y;
    return box;
}

VideoSequence filter_detections(const VideoSequence& seq, double det_threshold, double kp_threshold)
{
    VideoSequence out;
    out.video_id = seq.video_id;
    out.image_width = seq.image_width;
    out.image_height = seq.image_height;
    out.joint_names = seq.joint_names;
    out.frames.reserve(seq.frames.size());
    for (const Frame& frame : seq.frames) {
        Frame kept{frame.frame_index, frame.labeled, {}};
        for (const Detection& det : frame.detections) {
            if (det.score < det_threshold)
                continue;
            Detection d = det;
            for (Keypoint& k : d.pose.joints)
                if (k.score < kp_threshold)
                    k.present = false;
            kept.detections.push_back(std::move(d));
        }
        out.frames.push_back(std::move(kept));
    }
    return out;
}

void permute_joints(VideoSequence& seq, const std::vector<std::size_t>& joint_map)
{
    const std::size_t joints = seq.joint_count();
    if (joint_map.size() != joints)
        throw ValidationError("joint_map has " + std::to_string(joint_map.size()) + " entries, expected " +
                              std::to_string(joints));
    std::vector<bool> seen(joints, false);
    for (std::size_t src : joint_map) {
        if (src >= joints || seen[src])
            throw ValidationError("joint_map is not a permutation");
        seen[src] = true;
    }

    std::vector<std::string> names(joints);
    for (std::size_t j = 0; j < joints; ++j)
        names[j] = seq.joint_names[joint_map[j]];
    seq.joint_names = std::move(names);

    for (Frame& frame : seq.frames) {
        for (Detection& det : frame.detections) {
            if (det.pose.size() != joints)
                throw ValidationError("joint count mismatch while permuting joints");
            std::vector<Keypoint> permuted(joints);
            for (std::size_t j = 0; j < joints; ++j)
                permuted[j] = det.pose.joints[joint_map[j]];
            det.pose.joints = std::move(permuted);
        }
    }
}

} // namespace kptrack
