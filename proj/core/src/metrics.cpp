// SPDX-License-Identifier: Apache-2.0
#include "kptrack/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include "kptrack/assignment.hpp"

namespace kptrack {

double head_size(const Box& gt_head_box)
{
    const double diag = gt_head_box.diagonal();
    if (!(diag > 0.0) || !std::isfinite(diag))
        throw ValidationError("degenerate head box");
    return kHeadSizeFactor * diag;
}

bool pckh_correct(const Keypoint& gt, const Keypoint& pred, double head, double alpha)
{
    return std::hypot(gt.x - pred.x, gt.y - pred.y) <= alpha * head;
}

namespace {

double gt_head(const Detection& gt)
{
    if (!gt.head_box)
        throw ValidationError("ground truth person without head_box");
    return head_size(*gt.head_box);
}

std::size_t count_correct(const Detection& gt, double head, const Detection& pred, double alpha)
{
    const std::size_t joints = std::min(gt.pose.size(), pred.pose.size());
    std::size_t n = 0;
    for (std::size_t j = 0; j < joints; ++j) {
        const Keypoint& g = gt.pose[j];
        const Keypoint& p = pred.pose[j];
        if (g.present && p.present && pckh_correct(g, p, head, alpha))
            ++n;
    }
    return n;
}

PoseMatchResult match_with_heads(std::span<const Detection> gt, std::span<const double> heads,
                                 std::span<const Detection> pred, double alpha)
{
    PoseMatchResult out;
    Matrix counts(gt.size(), pred.size());
    for (std::size_t g = 0; g < gt.size(); ++g)
        for (std::size_t p = 0; p < pred.size(); ++p)
            counts(g, p) = static_cast<double>(count_correct(gt[g], heads[g], pred[p], alpha));

    std::vector<char> gt_used(gt.size(), 0), pred_used(pred.size(), 0);
    if (!counts.empty()) {
        Matrix cost(gt.size(), pred.size());
        for (std::size_t g = 0; g < gt.size(); ++g)
            for (std::size_t p = 0; p < pred.size(); ++p)
                cost(g, p) = -counts(g, p);
        for (auto [g, p] : hungarian_assign(cost).pairs) {
            if (counts(g, p) <= 0.0)
                continue;
            out.pairs.emplace_back(g, p);
            out.correct.push_back(static_cast<std::size_t>(counts(g, p)));
            gt_used[g] = pred_used[p] = 1;
        }
    }
    for (std::size_t g = 0; g < gt.size(); ++g)
        if (!gt_used[g])
            out.unmatched_gt.push_back(g);
    for (std::size_t p = 0; p < pred.size(); ++p)
        if (!pred_used[p])
            out.unmatched_pred.push_back(p);
    return out;
}

std::vector<double> heads_of(std::span<const Detection> gt)
{
    std::vector<double> heads;
    heads.reserve(gt.size());
    for (const Detection& g : gt)
        heads.push_back(gt_head(g));
    return heads;
}

void check_pair(const VideoSequence& gt, const VideoSequence& pred)
{
    if (gt.video_id != pred.video_id)
        throw ValidationError("video_id mismatch: ground truth \"" + gt.video_id + "\" vs prediction \"" +
                              pred.video_id + "\"");
    if (gt.joint_count() != pred.joint_count())
        throw ValidationError("joint count mismatch between ground truth and prediction");
}

const std::vector<Detection>& empty_detections()
{
    static const std::vector<Detection> none;
    return none;
}

class FramePairing {
public:
    explicit FramePairing(const VideoSequence& pred)
    {
        for (const Frame& f : pred.frames)
            by_index_.emplace(f.frame_index, &f);
    }
    const std::vector<Detection>& detections(std::int64_t frame_index) const
    {
        auto it = by_index_.find(frame_index);
        return it == by_index_.end() ? empty_detections() : it->second->detections;
    }

private:
    std::unordered_map<std::int64_t, const Frame*> by_index_;
};

double mota_of(const JointCounts& c)
{
    if (c.gt <= 0)
        return std::numeric_limits<double>::quiet_NaN();
    return 100.0 * (1.0 - static_cast<double>(c.fn + c.fp + c.idsw) / static_cast<double>(c.gt));
}

double mean_defined(std::span<const double> values)
{
    double sum = 0.0;
    std::size_t n = 0;
    for (double v : values)
        if (!std::isnan(v)) {
            sum += v;
            ++n;
        }
    return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

} // namespace

std::size_t count_correct_joints(const Detection& gt, const Detection& pred, double alpha)
{
    return count_correct(gt, gt_head(gt), pred, alpha);
}

PoseMatchResult match_poses_frame(std::span<const Detection> gt, std::span<const Detection> pred, double alpha)
{
    const auto heads = heads_of(gt);
    return match_with_heads(gt, heads, pred, alpha);
}

JointCounts EvalReport::total_counts() const
{
    JointCounts total;
    for (const auto& c : counts)
        total += c;
    return total;
}

std::vector<BodyPart> body_parts(const std::vector<std::string>& joint_names)
{
    struct Rule {
        const char* part;
        std::vector<const char*> keys;
    };
    static const std::vector<Rule> rules = {
        {"Head", {"head", "nose", "neck", "eye", "ear"}},
        {"Shou", {"shoulder"}},
        {"Elb", {"elbow"}},
        {"Wri", {"wrist"}},
        {"Hip", {"hip"}},
        {"Knee", {"knee"}},
        {"Ankl", {"ankle"}},
    };
    std::vector<BodyPart> parts;
    for (const Rule& rule : rules) {
        BodyPart part{rule.part, {}};
        for (std::size_t j = 0; j < joint_names.size(); ++j) {
            std::string lower = joint_names[j];
            std::transform(lower.begin(), lower.end(), lower.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            for (const char* key : rule.keys)
                if (lower.find(key) != std::string::npos) {
                    part.joints.push_back(j);
                    break;
                }
        }
        if (!part.joints.empty())
            parts.push_back(std::move(part));
    }
    return parts;
}

double part_ap(const EvalReport& r, const BodyPart& part)
{
    std::vector<double> values;
    for (std::size_t j : part.joints)
        if (j < r.ap.size())
            values.push_back(r.ap[j]);
    return mean_defined(values);
}

double part_mota(const EvalReport& r, const BodyPart& part)
{
    JointCounts sum;
    for (std::size_t j : part.joints)
        if (j < r.counts.size())
            sum += r.counts[j];
    return mota_of(sum);
}

EvalReport evaluate_mot(const VideoSequence& gt, const VideoSequence& pred, double alpha)
{
    check_pair(gt, pred);
    for (const Frame& f : pred.frames)
        for (const Detection& d : f.detections)
            if (!d.track_id)
                throw ValidationError("prediction at frame_index " + std::to_string(f.frame_index) +
                                      " has no track_id; run tracking first");

    const std::size_t joints = gt.joint_count();
    EvalReport report;
    report.joint_names = gt.joint_names;
    report.alpha = alpha;
    report.has_mot = true;
    report.counts.assign(joints, {});
    report.localization.assign(joints, 0.0);

    // Last prediction id matched to each (gt track, joint).
    std::map<std::pair<TrackId, std::size_t>, TrackId> last_match;
    const FramePairing pairing(pred);

    for (const Frame& gframe : gt.frames) {
        if (!gframe.labeled)
            continue;
        const auto& gts = gframe.detections;
        const auto& preds = pairing.detections(gframe.frame_index);
        const auto heads = heads_of(gts);
        const PoseMatchResult match = match_with_heads(gts, heads, preds, alpha);

        for (const Detection& g : gts)
            for (std::size_t j = 0; j < joints; ++j)
                if (g.pose[j].present)
                    ++report.counts[j].gt;

        for (auto [gi, pi] : match.pairs) {
            const Detection& g = gts[gi];
            const Detection& p = preds[pi];
            const double head = heads[gi];
            for (std::size_t j = 0; j < joints; ++j) {
                const Keypoint& gk = g.pose[j];
                const Keypoint& pk = p.pose[j];
                JointCounts& c = report.counts[j];
                if (gk.present && pk.present) {
                    if (pckh_correct(gk, pk, head, alpha)) {
                        ++c.tp;
                        const double d = std::hypot(gk.x - pk.x, gk.y - pk.y);
                        report.localization[j] += 1.0 - d / (alpha * head);
                        const auto key = std::make_pair(*g.track_id, j);
                        auto it = last_match.find(key);
                        if (it != last_match.end() && it->second != *p.track_id)
                            ++c.idsw;
                        last_match[key] = *p.track_id;
                    } else {
                        ++c.fp;
                        ++c.fn;
                    }
                } else if (pk.present) {
                    ++c.fp;
                } else if (gk.present) {
                    ++c.fn;
                }
            }
        }
        for (std::size_t pi : match.unmatched_pred)
            for (std::size_t j = 0; j < joints; ++j)
                if (preds[pi].pose[j].present)
                    ++report.counts[j].fp;
        for (std::size_t gi : match.unmatched_gt)
            for (std::size_t j = 0; j < joints; ++j)
                if (gts[gi].pose[j].present)
                    ++report.counts[j].fn;
    }

    report.mota.resize(joints);
    for (std::size_t j = 0; j < joints; ++j)
        report.mota[j] = mota_of(report.counts[j]);
    const JointCounts total = report.total_counts();
    report.mota_total = mota_of(total);
    const double loc = std::accumulate(report.localization.begin(), report.localization.end(), 0.0);
    report.motp = total.tp > 0 ? 100.0 * loc / static_cast<double>(total.tp) : 0.0;
    report.precision = total.tp + total.fp > 0
                           ? 100.0 * static_cast<double>(total.tp) / static_cast<double>(total.tp + total.fp)
                           : 0.0;
    report.recall = total.tp + total.fn > 0
                        ? 100.0 * static_cast<double>(total.tp) / static_cast<double>(total.tp + total.fn)
                        : 0.0;
    return report;
}

double average_precision(std::vector<std::pair<double, bool>> hits, std::int64_t positives)
{
    if (positives <= 0)
        return std::numeric_limits<double>::quiet_NaN();
    std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    std::vector<double> precision(hits.size()), recall(hits.size());
    std::int64_t tp = 0;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        if (hits[i].second)
            ++tp;
        precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
        recall[i] = static_cast<double>(tp) / static_cast<double>(positives);
    }
    for (std::size_t i = hits.size(); i-- > 1;)
        precision[i - 1] = std::max(precision[i - 1], precision[i]);

    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        ap += (recall[i] - prev_recall) * precision[i];
        prev_recall = recall[i];
    }
    return ap;
}

EvalReport evaluate_map(const VideoSequence& gt, const VideoSequence& pred, double alpha)
{
    check_pair(gt, pred);
    const std::size_t joints = gt.joint_count();
    EvalReport report;
    report.joint_names = gt.joint_names;
    report.alpha = alpha;
    report.has_map = true;

    std::vector<std::vector<std::pair<double, bool>>> hits(joints);
    std::vector<std::int64_t> positives(joints, 0);
    const FramePairing pairing(pred);

    for (const Frame& gframe : gt.frames) {
        if (!gframe.labeled)
            continue;
        const auto& gts = gframe.detections;
        const auto& preds = pairing.detections(gframe.frame_index);
        const auto heads = heads_of(gts);
        for (const Detection& g : gts)
            for (std::size_t j = 0; j < joints; ++j)
                if (g.pose[j].present)
                    ++positives[j];

        std::vector<std::size_t> order(preds.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return preds[a].score > preds[b].score; });

        std::vector<char> claimed(gts.size(), 0);
        for (std::size_t pi : order) {
            const Detection& p = preds[pi];
            // Claim the unclaimed ground-truth pose with the highest PCKh.
            std::size_t best = gts.size();
            double best_pckh = 0.0;
            for (std::size_t gi = 0; gi < gts.size(); ++gi) {
                if (claimed[gi])
                    continue;
                const std::size_t labeled = gts[gi].pose.present_count();
                if (labeled == 0)
                    continue;
                const double pckh = static_cast<double>(count_correct(gts[gi], heads[gi], p, alpha)) /
                                    static_cast<double>(labeled);
                if (pckh > best_pckh) {
                    best_pckh = pckh;
                    best = gi;
                }
            }
            if (best < gts.size())
                claimed[best] = 1;

            for (std::size_t j = 0; j < joints; ++j) {
                const Keypoint& pk = p.pose[j];
                if (!pk.present)
                    continue;
                bool tp = false;
                if (best < gts.size()) {
                    const Keypoint& gk = gts[best].pose[j];
                    tp = gk.present && pckh_correct(gk, pk, heads[best], alpha);
                }
                hits[j].emplace_back(p.score, tp);
            }
        }
    }

    report.ap.resize(joints);
    for (std::size_t j = 0; j < joints; ++j)
        report.ap[j] = 100.0 * average_precision(std::move(hits[j]), positives[j]);
    report.map_total = mean_defined(report.ap);
    return report;
}

EvalReport evaluate(const VideoSequence& gt, const VideoSequence& pred, double alpha)
{
    EvalReport report = evaluate_mot(gt, pred, alpha);
    EvalReport map = evaluate_map(gt, pred, alpha);
    report.has_map = true;
    report.ap = std::move(map.ap);
    report.map_total = map.map_total;
    return report;
}

} // namespace kptrack
