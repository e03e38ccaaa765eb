// SPDX-License-Identifier: Apache-2.0
#include "kptrack/similarity.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "kptrack/log.hpp"
#include "kptrack/sequence_io.hpp"

namespace kptrack {

std::string_view to_string(SimilarityKind kind)
{
    switch (kind) {
    case SimilarityKind::bbox_iou: return "bbox_iou";
    case SimilarityKind::pose_pckh: return "pose_pckh";
    case SimilarityKind::feature_cosine: return "feature_cosine";
    case SimilarityKind::combined: return "combined";
    case SimilarityKind::external: return "external";
    }
    return "unknown";
}

SimilarityKind parse_similarity_kind(std::string_view name)
{
    if (name == "iou" || name == "bbox_iou")
        return SimilarityKind::bbox_iou;
    if (name == "pckh" || name == "pose_pckh")
        return SimilarityKind::pose_pckh;
    if (name == "feat" || name == "cosine" || name == "feature_cosine")
        return SimilarityKind::feature_cosine;
    if (name == "combined")
        return SimilarityKind::combined;
    if (name == "external")
        return SimilarityKind::external;
    throw ValidationError("unknown similarity criterion \"" + std::string(name) + "\"");
}

ExternalScores ExternalScores::parse(std::string_view json_text)
{
    using nlohmann::json;
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("malformed external score file: ") + e.what());
    }
    detail::require_array(root, "external scores");
    ExternalScores scores;
    for (std::size_t i = 0; i < root.size(); ++i) {
        const std::string path = "external scores[" + std::to_string(i) + "]";
        const json& e = root[i];
        if (!e.is_object())
            throw SchemaError(path + ": expected object");
        const auto frame = detail::require_integer(detail::field(e, "frame", path), path + ".frame");
        const auto prev = detail::require_integer(detail::field(e, "prev_index", path), path + ".prev_index");
        const auto curr = detail::require_integer(detail::field(e, "curr_index", path), path + ".curr_index");
        const double sim = detail::require_number(detail::field(e, "similarity", path), path + ".similarity");
        if (prev < 0 || curr < 0)
            throw SchemaError(path + ": negative detection index");
        if (!std::isfinite(sim))
            throw SchemaError(path + ".similarity: not finite");
        std::optional<std::int64_t> prev_frame;
        if (auto it = e.find("prev_frame"); it != e.end() && !it->is_null())
            prev_frame = detail::require_integer(*it, path + ".prev_frame");
        scores.add(frame, static_cast<std::size_t>(prev), static_cast<std::size_t>(curr), sim, prev_frame);
    }
    return scores;
}

ExternalScores ExternalScores::load(const std::filesystem::path& path)
{
    return parse(read_text_file(path));
}

void ExternalScores::add(std::int64_t frame, std::size_t prev_index, std::size_t curr_index, double similarity,
                         std::optional<std::int64_t> prev_frame)
{
    if (prev_frame)
        explicit_[{*prev_frame, prev_index, frame, curr_index}] = similarity;
    else
        adjacent_[{frame, prev_index, curr_index}] = similarity;
}

std::optional<double> ExternalScores::lookup(std::int64_t prev_frame, std::size_t prev_index, std::int64_t frame,
                                             std::size_t curr_index, bool prev_is_adjacent) const
{
    if (auto it = explicit_.find({prev_frame, prev_index, frame, curr_index}); it != explicit_.end())
        return it->second;
    if (prev_is_adjacent)
        if (auto it = adjacent_.find({frame, prev_index, curr_index}); it != adjacent_.end())
            return it->second;
    return std::nullopt;
}

void SimilarityCriterion::validate() const
{
    if (kind == SimilarityKind::combined) {
        double sum = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0) || !std::isfinite(w))
                throw ValidationError("combined weights must be finite and non-negative");
            sum += w;
        }
        if (!(sum > 0.0))
            throw ValidationError("combined weights must not all be zero");
    }
    if (kind == SimilarityKind::external && !external)
        throw ValidationError("external criterion requires a score table");
    if (!(pckh_alpha > 0.0) || !(pckh_norm_scale > 0.0))
        throw ValidationError("pckh alpha and norm scale must be positive");
}

bool SimilarityCriterion::needs_features() const noexcept
{
    return kind == SimilarityKind::feature_cosine || (kind == SimilarityKind::combined && weights[2] > 0.0);
}

CostMatrix CostMatrix::from_similarity(Matrix similarity)
{
    CostMatrix m;
    m.cost = Matrix(similarity.rows(), similarity.cols());
    for (std::size_t r = 0; r < similarity.rows(); ++r)
        for (std::size_t c = 0; c < similarity.cols(); ++c)
            m.cost(r, c) = -similarity(r, c);
    m.similarity = std::move(similarity);
    return m;
}

CostMatrix CostMatrix::from_cost(Matrix cost)
{
    CostMatrix m;
    m.similarity = Matrix(cost.rows(), cost.cols());
    for (std::size_t r = 0; r < cost.rows(); ++r)
        for (std::size_t c = 0; c < cost.cols(); ++c)
            m.similarity(r, c) = -cost(r, c);
    m.cost = std::move(cost);
    return m;
}

double iou(const Box& a, const Box& b) noexcept
{
    const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    const double inter = (iw > 0.0 && ih > 0.0) ? iw * ih : 0.0;
    const double uni = a.area() + b.area() - inter;
    if (!(uni > 0.0))
        return 0.0;
    return inter / uni;
}

double pose_pckh_similarity(const Detection& a, const Detection& b, double alpha, double norm_scale)
{
    const std::size_t joints = std::min(a.pose.size(), b.pose.size());
    const double threshold = alpha * norm_scale * a.box.diagonal();
    std::size_t common = 0;
    std::size_t within = 0;
    for (std::size_t j = 0; j < joints; ++j) {
        const Keypoint& ka = a.pose[j];
        const Keypoint& kb = b.pose[j];
        if (!ka.present || !kb.present)
            continue;
        ++common;
        if (std::hypot(ka.x - kb.x, ka.y - kb.y) <= threshold)
            ++within;
    }
    if (common == 0)
        return 0.0;
    return static_cast<double>(within) / static_cast<double>(common);
}

double feature_cosine(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw ValidationError("feature dimension mismatch: " + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()));
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) {
        warn("feature_cosine: zero feature vector, similarity set to 0");
        return 0.0;
    }
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

namespace {

const std::vector<double>& require_feature(const Detection& d)
{
    if (!d.feature)
        throw ValidationError("missing field \"feature\": the similarity criterion needs appearance features");
    return *d.feature;
}

double base_similarity(const Detection& prev, const Detection& curr, const SimilarityCriterion& c)
{
    switch (c.kind) {
    case SimilarityKind::bbox_iou:
        return iou(prev.box, curr.box);
    case SimilarityKind::pose_pckh:
        return pose_pckh_similarity(prev, curr, c.pckh_alpha, c.pckh_norm_scale);
    case SimilarityKind::feature_cosine:
        return feature_cosine(require_feature(prev), require_feature(curr));
    case SimilarityKind::combined: {
        const auto& w = c.weights;
        double mixed = 0.0;
        if (w[0] > 0.0)
            mixed += w[0] * iou(prev.box, curr.box);
        if (w[1] > 0.0)
            mixed += w[1] * pose_pckh_similarity(prev, curr, c.pckh_alpha, c.pckh_norm_scale);
        if (w[2] > 0.0)
            mixed += w[2] * 0.5 * (feature_cosine(require_feature(prev), require_feature(curr)) + 1.0);
        return mixed / (w[0] + w[1] + w[2]);
    }
    case SimilarityKind::external:
        break;
    }
    throw ValidationError("external similarity needs a match context");
}

} // namespace

double pair_similarity(const Detection& prev, const Detection& curr, const SimilarityCriterion& criterion)
{
    return base_similarity(prev, curr, criterion);
}

CostMatrix build_cost_matrix(std::span<const Detection> prev, std::span<const Detection> curr,
                             const SimilarityCriterion& criterion, const MatchContext* context)
{
    criterion.validate();
    Matrix sim(prev.size(), curr.size());

    if (criterion.kind == SimilarityKind::external) {
        if (!context || context->prev.size() != prev.size())
            throw ValidationError("external similarity needs the origin of every previous detection");
        for (std::size_t i = 0; i < prev.size(); ++i) {
            const DetectionRef& ref = context->prev[i];
            const bool adjacent = context->adjacent_frame && *context->adjacent_frame == ref.frame_index;
            for (std::size_t j = 0; j < curr.size(); ++j) {
                // Edges absent from the table carry no evidence of identity.
                sim(i, j) = criterion.external->lookup(ref.frame_index, ref.index, context->curr_frame, j, adjacent)
                                .value_or(0.0);
            }
        }
        return CostMatrix::from_similarity(std::move(sim));
    }

    for (std::size_t i = 0; i < prev.size(); ++i)
        for (std::size_t j = 0; j < curr.size(); ++j)
            sim(i, j) = base_similarity(prev[i], curr[j], criterion);
    return CostMatrix::from_similarity(std::move(sim));
}

} // namespace kptrack
