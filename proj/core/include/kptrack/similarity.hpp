// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file similarity.hpp
/// \brief Pairwise detection similarities and the cost matrices fed to the
/// assignment solvers. Every cost is the negated similarity.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "kptrack/core_model.hpp"
#include "kptrack/matrix.hpp"

namespace kptrack {

enum class SimilarityKind { bbox_iou, pose_pckh, feature_cosine, combined, external };

std::string_view to_string(SimilarityKind kind);
/// Accepts the canonical names and the short CLI aliases (iou, pckh, feat).
SimilarityKind parse_similarity_kind(std::string_view name);

/// Precomputed per-edge similarities from an external model.
///
/// File format: a JSON list of
///   {"frame": int, "prev_index": int, "curr_index": int, "similarity": float,
///    "prev_frame": int?}
/// `frame` is the current frame_index and `prev_index` indexes a detection in
/// frame `prev_frame`. Without `prev_frame` the entry refers to the frame
/// immediately preceding `frame` in the sequence.
class ExternalScores {
public:
    static ExternalScores parse(std::string_view json_text);
    static ExternalScores load(const std::filesystem::path& path);

    void add(std::int64_t frame, std::size_t prev_index, std::size_t curr_index, double similarity,
             std::optional<std::int64_t> prev_frame = std::nullopt);

    /// Explicit prev_frame entries win over adjacency entries.
    std::optional<double> lookup(std::int64_t prev_frame, std::size_t prev_index, std::int64_t frame,
                                 std::size_t curr_index, bool prev_is_adjacent) const;

    std::size_t size() const noexcept { return explicit_.size() + adjacent_.size(); }

private:
    std::map<std::tuple<std::int64_t, std::size_t, std::int64_t, std::size_t>, double> explicit_;
    std::map<std::tuple<std::int64_t, std::size_t, std::size_t>, double> adjacent_;
};

struct SimilarityCriterion {
    SimilarityKind kind = SimilarityKind::bbox_iou;
    /// (iou, pckh, cosine) mixing weights, combined only.
    std::array<double, 3> weights{1.0, 1.0, 1.0};
    double pckh_alpha = 0.5;
    /// Prediction-to-prediction PCKh normalizer as a fraction of the earlier
    /// detection's box diagonal.
    double pckh_norm_scale = 0.1;
    std::shared_ptr<const ExternalScores> external;

    /// Throws ValidationError on negative or all-zero combined weights.
    void validate() const;
    bool needs_features() const noexcept;
};

/// Where each row of a cost matrix came from; needed by the external
/// criterion only.
struct DetectionRef {
    std::int64_t frame_index = 0;
    std::size_t index = 0;
};

struct MatchContext {
    std::int64_t curr_frame = 0;
    /// frame_index of the frame immediately before `curr_frame`, if any.
    std::optional<std::int64_t> adjacent_frame;
    std::vector<DetectionRef> prev;
};

struct CostMatrix {
    Matrix similarity;
    Matrix cost;

    std::size_t rows() const noexcept { return similarity.rows(); }
    std::size_t cols() const noexcept { return similarity.cols(); }

    static CostMatrix from_similarity(Matrix similarity);
    static CostMatrix from_cost(Matrix cost);
};

double iou(const Box& a, const Box& b) noexcept;

/// Fraction of jointly present joints within alpha * norm_scale * diag(a.box).
/// Zero when no joint is present in both poses.
double pose_pckh_similarity(const Detection& a, const Detection& b, double alpha, double norm_scale);

/// Cosine of the angle between two feature vectors. Throws ValidationError
/// on a dimension mismatch; a zero vector yields 0 and a warning.
double feature_cosine(std::span<const double> a, std::span<const double> b);

double pair_similarity(const Detection& prev, const Detection& curr, const SimilarityCriterion& criterion);

CostMatrix build_cost_matrix(std::span<const Detection> prev, std::span<const Detection> curr,
                             const SimilarityCriterion& criterion, const MatchContext* context = nullptr);

} // namespace kptrack
