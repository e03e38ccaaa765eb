// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file metrics.hpp
/// \brief PCKh keypoint correctness, per-joint average precision and
/// per-joint CLEAR-MOT scoring of tracked poses against ground truth.
///
/// Only ground-truth frames with `labeled == true` are scored; prediction
/// frames are paired with them by frame_index.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kptrack/core_model.hpp"

namespace kptrack {

inline constexpr double kDefaultPckhAlpha = 0.5;
/// MPII convention: head size is 0.6 x the head-box diagonal.
inline constexpr double kHeadSizeFactor = 0.6;

/// Throws ValidationError for a zero-diagonal box ("degenerate head box").
double head_size(const Box& gt_head_box);

/// Closed threshold: distance <= alpha * head counts as correct.
bool pckh_correct(const Keypoint& gt, const Keypoint& pred, double head, double alpha = kDefaultPckhAlpha);

struct PoseMatchResult {
    /// (gt index, pred index), sorted by gt index.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    /// PCKh-correct joint count of each pair.
    std::vector<std::size_t> correct;
    std::vector<std::size_t> unmatched_gt;
    std::vector<std::size_t> unmatched_pred;
};

/// Number of joints of `pred` that are PCKh-correct against `gt`.
std::size_t count_correct_joints(const Detection& gt, const Detection& pred, double alpha);

/// One-to-one matching that maximizes the total number of PCKh-correct
/// joints; pairs with no correct joint are dropped.
PoseMatchResult match_poses_frame(std::span<const Detection> gt, std::span<const Detection> pred,
                                  double alpha = kDefaultPckhAlpha);

struct JointCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t idsw = 0;
    std::int64_t gt = 0;

    JointCounts& operator+=(const JointCounts& o)
    {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        idsw += o.idsw;
        gt += o.gt;
        return *this;
    }
    friend bool operator==(const JointCounts&, const JointCounts&) = default;
};

/// Percent values. Rates whose denominator is zero are NaN for mAP/MOTA
/// (no ground truth to score against) and 0 for MOTP/precision/recall.
struct EvalReport {
    std::vector<std::string> joint_names;
    double alpha = kDefaultPckhAlpha;

    bool has_map = false;
    std::vector<double> ap;
    double map_total = 0.0;

    bool has_mot = false;
    std::vector<double> mota;
    double mota_total = 0.0;
    double motp = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    std::vector<JointCounts> counts;
    /// Per joint sum over TPs of (1 - d / (alpha * head)).
    std::vector<double> localization;

    JointCounts total_counts() const;
};

/// Aggregation of joints into the body-part columns used in result tables
/// (Head, Shou, Elb, Wri, Hip, Knee, Ankl). Joints whose name matches no part
/// are left out; parts with no joint are omitted.
struct BodyPart {
    std::string name;
    std::vector<std::size_t> joints;
};
std::vector<BodyPart> body_parts(const std::vector<std::string>& joint_names);
double part_ap(const EvalReport& r, const BodyPart& part);
double part_mota(const EvalReport& r, const BodyPart& part);

EvalReport evaluate_mot(const VideoSequence& gt, const VideoSequence& pred, double alpha = kDefaultPckhAlpha);
EvalReport evaluate_map(const VideoSequence& gt, const VideoSequence& pred, double alpha = kDefaultPckhAlpha);
/// Both halves in one report.
EvalReport evaluate(const VideoSequence& gt, const VideoSequence& pred, double alpha = kDefaultPckhAlpha);

/// Area under the step precision/recall curve with the precision envelope
/// taken as the running max to the right. `hits` are (score, is_tp) pairs;
/// ties keep input order. Returns a fraction in [0, 1].
double average_precision(std::vector<std::pair<double, bool>> hits, std::int64_t positives);

} // namespace kptrack
