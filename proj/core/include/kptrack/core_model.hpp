// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file core_model.hpp
/// \brief Domain types shared by every stage: keypoints, poses, boxes,
/// detections, frames and whole video sequences.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kptrack {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input file does not match the sequence schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Structurally valid data that breaks a domain invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

inline constexpr std::size_t kDefaultJointCount = 15;

struct Keypoint {
    double x = 0.0;
    double y = 0.0;
    /// Unnormalized heatmap confidence; may exceed 1.
    double score = 0.0;
    /// When false, x/y/score carry no meaning.
    bool present = false;

    friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

struct Pose {
    std::vector<Keypoint> joints;

    Pose() = default;
    explicit Pose(std::size_t joint_count) : joints(joint_count) {}
    explicit Pose(std::vector<Keypoint> kps) : joints(std::move(kps)) {}

    std::size_t size() const noexcept { return joints.size(); }
    Keypoint& operator[](std::size_t j) { return joints[j]; }
    const Keypoint& operator[](std::size_t j) const { return joints[j]; }
    std::size_t present_count() const noexcept;

    friend bool operator==(const Pose&, const Pose&) = default;
};

/// Axis-aligned box in continuous pixel coordinates (no +1 convention).
struct Box {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const noexcept { return x_max - x_min; }
    double height() const noexcept { return y_max - y_min; }
    double area() const noexcept { return width() * height(); }
    double diagonal() const noexcept { return std::hypot(width(), height()); }
    double center_x() const noexcept { return 0.5 * (x_min + x_max); }
    double center_y() const noexcept { return 0.5 * (y_min + y_max); }
    bool valid() const noexcept;

    friend bool operator==(const Box&, const Box&) = default;
};

using TrackId = std::int64_t;

struct Detection {
    Box box;
    /// Detector confidence in [0, 1].
    double score = 1.0;
    Pose pose;
    std::optional<std::vector<double>> feature;
    std::optional<TrackId> track_id;
    /// Ground truth only: annotated head box used for the PCKh normalizer.
    std::optional<Box> head_box;

    friend bool operator==(const Detection&, const Detection&) = default;
};

struct Frame {
    std::int64_t frame_index = 0;
    bool labeled = true;
    std::vector<Detection> detections;

    friend bool operator==(const Frame&, const Frame&) = default;
};

struct VideoSequence {
    std::string video_id;
    int image_width = 0;
    int image_height = 0;
    std::vector<std::string> joint_names;
    std::vector<Frame> frames;

    std::size_t joint_count() const noexcept { return joint_names.size(); }
    std::size_t detection_count() const noexcept;

    friend bool operator==(const VideoSequence&, const VideoSequence&) = default;
};

enum class SequenceRole { prediction, groundtruth };

/// The 15 PoseTrack joints in annotation order.
const std::vector<std::string>& posetrack_joint_names();

/// Throws ValidationError when a domain invariant is broken: non-monotone
/// frame indices, joint-count mismatches, non-finite coordinates, inverted
/// boxes, inconsistent feature dimensions, and (for ground truth) persons
/// without a track id or head box.
void validate_sequence(const VideoSequence& seq, SequenceRole role);

/// Tight box around the present joints, grown by `dilation` of its size in
/// each dimension (half on each side).
Box derive_box_from_pose(const Pose& pose, double dilation = 0.20);

/// Drops detections scored below `det_threshold` and hides keypoints scored
/// below `kp_threshold`. Frame structure is kept.
VideoSequence filter_detections(const VideoSequence& seq, double det_threshold,
                                double kp_threshold);

/// Reorders joints so that output joint i is input joint `joint_map[i]`.
/// Throws ValidationError if `joint_map` is not a permutation of 0..J-1.
void permute_joints(VideoSequence& seq, const std::vector<std::size_t>& joint_map);

} // namespace kptrack
