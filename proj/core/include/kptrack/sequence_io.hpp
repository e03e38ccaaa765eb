// SPDX-License-Identifier: Apache-2.0
#pragma once

// Sequence file format (UTF-8 JSON):
//
//   {"video_id": str, "image_size": [w, h], "joint_names": [str x J],
//    "frames": [{"frame_index": int, "labeled": bool,
//                "detections": [{"bbox": [x1, y1, x2, y2], "score": float,
//                                "keypoints": [[x, y, score, present01] x J],
//                                "feature": [float...]?, "track_id": int?,
//                                "head_box": [x1, y1, x2, y2]?}]}]}
//
// Reals are written in shortest round-trip form so load(save(s)) == s.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kptrack/core_model.hpp"

namespace kptrack {

VideoSequence parse_sequence(std::string_view json_text, SequenceRole role,
                             const std::optional<std::vector<std::size_t>>& joint_map = std::nullopt);

VideoSequence load_sequence(const std::filesystem::path& path, SequenceRole role,
                            const std::optional<std::vector<std::size_t>>& joint_map = std::nullopt);

std::string serialize_sequence(const VideoSequence& seq);

void save_sequence(const VideoSequence& seq, const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_text_file(const std::filesystem::path& path);

} // namespace kptrack
