// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file oracles.hpp
/// \brief Upper-bound transforms: what the tracker would score with perfect
/// identity association, perfect keypoints, or both, given its detections.

#include <string_view>

#include "kptrack/core_model.hpp"
#include "kptrack/metrics.hpp"

namespace kptrack {

enum class OracleMode { perfect_association, perfect_keypoints, both };

std::string_view to_string(OracleMode mode);
/// Accepts assoc / kpts / both and the long names.
OracleMode parse_oracle_mode(std::string_view name);

enum class OracleOrder { association_first, keypoints_first };

/// Copies the ground-truth track id onto every prediction that the
/// evaluation's per-frame pose matching pairs with a ground-truth person.
/// Every other prediction id is relabeled densely from max GT id + 1 upward
/// (rank order of the original ids), keeping the two id spaces disjoint.
VideoSequence perfect_association(const VideoSequence& gt, const VideoSequence& pred,
                                  double alpha = kDefaultPckhAlpha);

/// On labeled frames, matches ground truth to predictions by box IoU
/// (Hungarian, IoU > 0 required) and replaces each matched prediction's pose
/// with the ground-truth pose, keypoint scores set to 1.
VideoSequence perfect_keypoints(const VideoSequence& gt, const VideoSequence& pred);

VideoSequence apply_oracle(const VideoSequence& gt, const VideoSequence& pred, OracleMode mode,
                           double alpha = kDefaultPckhAlpha,
                           OracleOrder order = OracleOrder::association_first);

} // namespace kptrack
