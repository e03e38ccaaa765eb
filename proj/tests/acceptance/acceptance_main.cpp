// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "kptrack/assignment.hpp"
#include "kptrack/linker.hpp"
#include "kptrack/metrics.hpp"
#include "kptrack/oracles.hpp"
#include "kptrack/rng.hpp"
#include "kptrack/synth.hpp"
#include "kptrack/tube_geometry.hpp"
#include "kptrack_tools/bench.hpp"
#include "reference.hpp"

using namespace kptrack;
using namespace kptrack::testing;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string format(const char* fmt, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// The pipeline's default configuration: detection cut-off 0.95, keypoint
// cut-off 1.95, Hungarian on box IoU, lookback 1.
VideoSequence track_defaults(const VideoSequence& pred, double det_threshold = 0.95)
{
    return track_video(filter_detections(pred, det_threshold, 1.95), LinkerConfig{});
}

std::vector<Matrix> assignment_suite()
{
    Rng rng(20240601);
    std::vector<Matrix> suite;
    for (int i = 0; i < 1000; ++i) {
        const auto rows = static_cast<std::size_t>(rng.uniform_int(1, 6));
        const auto cols = static_cast<std::size_t>(rng.uniform_int(1, 6));
        Matrix m(rows, cols);
        const bool integral = i % 2 == 0;
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                m(r, c) = integral ? static_cast<double>(rng.uniform_int(-5, 5)) : rng.uniform(-1.0, 1.0);
        suite.push_back(std::move(m));
    }
    return suite;
}

Outcome criterion_1()
{
    const auto suite = assignment_suite();
    const auto start = std::chrono::steady_clock::now();
    int mismatches = 0;
    for (const Matrix& m : suite)
        if (hungarian_assign(m).total_cost != brute_force_min_cost(m))
            ++mismatches;
    const double elapsed = seconds_since(start);
    return {mismatches == 0 && elapsed < 5.0,
            format("%d/1000 mismatches against enumeration, %.3f s (limit 5 s)", mismatches, elapsed)};
}

Outcome criterion_2()
{
    int violations = 0;
    for (const Matrix& m : assignment_suite())
        if (!(hungarian_assign(m).total_cost <= greedy_assign(m).total_cost))
            ++violations;
    return {violations == 0, format("hungarian > greedy on %d/1000 matrices", violations)};
}

Outcome criterion_3()
{
    const MotFixture perfect = mot_perfect();
    const MotFixture idsw = mot_id_switch();
    const MotFixture fp = mot_fp_heavy();
    const double a = evaluate_mot(perfect.gt, perfect.pred).mota_total;
    const double b = evaluate_mot(idsw.gt, idsw.pred).mota_total;
    const double c = evaluate_mot(fp.gt, fp.pred).mota_total;
    const bool ok = a == 100.0 && std::abs(b - 66.7) <= 0.05 && c < 0.0;
    return {ok, format("perfect %.4f (want 100), id switch %.4f (want 66.7 +-0.05), fp-heavy %.4f (want < 0)", a,
                       b, c)};
}

Outcome criterion_4()
{
    constexpr std::array<double, 3> thresholds{0.0, 0.5, 0.95};
    int trend_ok = 0;
    int map_ok = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const ScenarioConfig cfg = threshold_suite(seed);
        const VideoSequence gt = generate_ground_truth(cfg);
        const VideoSequence pred = corrupt_to_predictions(gt, cfg);
        std::array<EvalReport, 3> reports;
        for (std::size_t i = 0; i < thresholds.size(); ++i)
            reports[i] = evaluate(gt, track_defaults(pred, thresholds[i]));
        bool monotone = true;
        for (std::size_t i = 1; i < reports.size(); ++i)
            monotone = monotone && reports[i].mota_total >= reports[i - 1].mota_total &&
                       reports[i].recall <= reports[i - 1].recall;
        trend_ok += monotone;
        map_ok += reports[0].map_total >= reports[2].map_total;
    }
    return {trend_ok >= 19 && map_ok == 20,
            format("MOTA/recall trend holds on %d/20 seeds (need >= 19), mAP(0) >= mAP(0.95) on %d/20", trend_ok,
                   map_ok)};
}

Outcome criterion_5()
{
    int ok = 0;
    std::int64_t pa_idsw = 0;
    constexpr int kSeeds = 10;
    std::string first_failure;
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
        const ScenarioConfig cfg = noisy_suite(seed);
        const VideoSequence gt = generate_ground_truth(cfg);
        const VideoSequence raw = track_defaults(corrupt_to_predictions(gt, cfg));
        const EvalReport r_raw = evaluate_mot(gt, raw);
        const EvalReport r_pa = evaluate_mot(gt, apply_oracle(gt, raw, OracleMode::perfect_association));
        const EvalReport r_pk = evaluate_mot(gt, apply_oracle(gt, raw, OracleMode::perfect_keypoints));
        const EvalReport r_both = evaluate_mot(gt, apply_oracle(gt, raw, OracleMode::both));
        pa_idsw += r_pa.total_counts().idsw;
        const bool ordered = r_raw.mota_total <= r_pa.mota_total && r_raw.mota_total <= r_pk.mota_total &&
                             r_pk.mota_total <= r_both.mota_total && r_pa.total_counts().idsw == 0;
        ok += ordered;
        if (!ordered && first_failure.empty())
            first_failure = format("; seed %d: raw %.2f pa %.2f pk %.2f both %.2f", static_cast<int>(seed),
                                   r_raw.mota_total, r_pa.mota_total, r_pk.mota_total, r_both.mota_total);
    }
    return {ok == kSeeds,
            format("ordering holds on %d/%d seeds, IDSW under perfect association %lld", ok, kSeeds,
                   static_cast<long long>(pa_idsw)) +
                first_failure};
}

Outcome criterion_6()
{
    int completed = 0;
    int runs = 0;
    int identical = 0;
    constexpr int kSeeds = 5;
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
        const ScenarioConfig cfg = noisy_suite(seed);
        const VideoSequence pred =
            filter_detections(corrupt_to_predictions(generate_ground_truth(cfg), cfg), 0.95, 1.95);
        VideoSequence iou_run;
        for (SimilarityKind kind : {SimilarityKind::bbox_iou, SimilarityKind::pose_pckh,
                                    SimilarityKind::feature_cosine, SimilarityKind::combined}) {
            ++runs;
            LinkerConfig lc;
            lc.criterion.kind = kind;
            try {
                VideoSequence out = track_video(pred, lc);
                const auto ids = id_list(out);
                if (std::all_of(ids.begin(), ids.end(), [](const auto& id) { return id.has_value(); }))
                    ++completed;
                if (kind == SimilarityKind::bbox_iou)
                    iou_run = std::move(out);
            } catch (const std::exception&) {
            }
        }
        LinkerConfig degenerate;
        degenerate.criterion.kind = SimilarityKind::combined;
        degenerate.criterion.weights = {1.0, 0.0, 0.0};
        identical += id_list(track_video(pred, degenerate)) == id_list(iou_run);
    }
    return {completed == runs && identical == kSeeds,
            format("%d/%d criterion runs completed, combined(1,0,0) == iou ids on %d/%d seeds", completed, runs,
                   identical, kSeeds)};
}

Outcome criterion_7()
{
    ScenarioConfig cfg;
    cfg.frames = 100;
    cfg.actors = 10;
    const VideoSequence pred = corrupt_to_predictions(generate_ground_truth(cfg), cfg);
    const auto start = std::chrono::steady_clock::now();
    const VideoSequence tracked = track_video(pred, LinkerConfig{});
    const double single = seconds_since(start);

    const std::array<std::size_t, 3> frames{100, 200, 400};
    const cli::BenchResult r = cli::bench_tracking(frames, 10, 0, 15);
    const double r1 = r.points[1].seconds / r.points[0].seconds;
    const double r2 = r.points[2].seconds / r.points[1].seconds;
    const bool ok = single < 1.0 && r1 >= 1.6 && r1 <= 2.6 && r2 >= 1.6 && r2 <= 2.6 && r.fit.r_squared >= 0.98 &&
                    tracked.frames.size() == 100;
    return {ok, format("100x10 track %.4f s (limit 1 s); ratios %.3f, %.3f (window [1.6, 2.6]); R^2 %.4f (>= 0.98)",
                       single, r1, r2, r.fit.r_squared)};
}

Outcome criterion_8()
{
    const VideoSequence seq = gap_fixture();
    LinkerConfig k1;
    LinkerConfig k2;
    k2.lookback = 2;
    const std::size_t a = distinct_ids(track_video(seq, k1)).size();
    const std::size_t b = distinct_ids(track_video(seq, k2)).size();
    return {a == 2 && b == 1, format("K=1 -> %zu tracks (want 2), K=2 -> %zu tracks (want 1)", a, b)};
}

Outcome criterion_9()
{
    using namespace kptrack::tube;
    Rng rng(99);

    // Delta round trip.
    double worst_roundtrip = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const auto length = static_cast<std::size_t>(rng.uniform_int(1, 8));
        const double w = rng.uniform(4.0, 400.0), h = rng.uniform(4.0, 400.0);
        const double cx = rng.uniform(-100.0, 1000.0), cy = rng.uniform(-100.0, 1000.0);
        const TubeAnchor anchor{Box{cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2}, length};
        Tube target;
        for (std::size_t t = 0; t < length; ++t) {
            const double tw = w * std::exp(rng.uniform(-1.5, 1.5)), th = h * std::exp(rng.uniform(-1.5, 1.5));
            const double tx = cx + rng.uniform(-2.0, 2.0) * w, ty = cy + rng.uniform(-2.0, 2.0) * h;
            target.boxes.push_back(Box{tx - tw / 2, ty - th / 2, tx + tw / 2, ty + th / 2});
        }
        const Tube back = decode_tube_deltas(encode_tube_deltas(target, anchor), anchor);
        for (std::size_t t = 0; t < length; ++t) {
            const Box& a = target.boxes[t];
            const Box& b = back.boxes[t];
            for (auto [u, v] : {std::pair{a.x_min, b.x_min}, std::pair{a.y_min, b.y_min},
                                std::pair{a.x_max, b.x_max}, std::pair{a.y_max, b.y_max}})
                worst_roundtrip = std::max(worst_roundtrip, std::abs(u - v) / std::max(1.0, std::abs(u)));
        }
    }

    // Replicated-error regression loss.
    auto replicated_loss = [](std::size_t t_len) {
        TubeDeltas target{std::vector<double>(4 * t_len, 0.0)};
        TubeDeltas pred = target;
        for (std::size_t t = 0; t < t_len; ++t)
            pred.values[4 * t] = 0.5;
        const std::vector<TubeDeltas> preds{pred}, targets{target};
        const std::vector<std::array<double, 2>> logits{{0.0, 0.0}};
        const std::vector<AnchorLabel> labels{AnchorLabel{AnchorLabelKind::foreground, 0, 1.0}};
        return tracking_loss(preds, targets, logits, labels, t_len).reg;
    };
    const double loss1 = replicated_loss(1);
    const double loss3 = replicated_loss(3);
    const bool loss_ok = std::abs(loss1 - 0.125) <= 1e-12 && std::abs(loss3 - 0.125) <= 1e-12;

    // RoIAlign against the dense oracle.
    double worst_roi = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto t_len = static_cast<std::size_t>(rng.uniform_int(1, 3));
        const auto c = static_cast<std::size_t>(rng.uniform_int(1, 3));
        const auto h = static_cast<std::size_t>(rng.uniform_int(2, 9));
        const auto w = static_cast<std::size_t>(rng.uniform_int(2, 9));
        FeatureVolume vol{Tensor({t_len, c, h, w}), static_cast<double>(rng.uniform_int(1, 16))};
        for (double& v : vol.data.data())
            v = rng.uniform(-1.0, 1.0);
        Tube tube;
        const double img_w = static_cast<double>(w) * vol.stride, img_h = static_cast<double>(h) * vol.stride;
        for (std::size_t t = 0; t < t_len; ++t) {
            const double x0 = rng.uniform(-0.3 * img_w, img_w), y0 = rng.uniform(-0.3 * img_h, img_h);
            tube.boxes.push_back(
                Box{x0, y0, x0 + rng.uniform(0.05, 1.2) * img_w, y0 + rng.uniform(0.05, 1.2) * img_h});
        }
        const auto r = static_cast<std::size_t>(rng.uniform_int(1, 4));
        const auto s = static_cast<std::size_t>(rng.uniform_int(1, 3));
        const Tensor fast = spatiotemporal_roi_align(vol, tube, r, s);
        const Tensor slow = dense_roi_align(vol, tube, r, s);
        for (std::size_t k = 0; k < fast.size(); ++k)
            worst_roi = std::max(worst_roi, std::abs(fast.data()[k] - slow.data()[k]));
    }

    // Center inflation on temporally constant clips.
    double worst_conv = 0.0;
    for (int i = 0; i < 20; ++i) {
        const std::size_t c_in = 2, c_out = 3, k = 3, kt = 3, t_len = 5, h = 7, w = 6;
        Tensor w2({c_out, c_in, k, k});
        for (double& v : w2.data())
            v = rng.uniform(-1.0, 1.0);
        Tensor image({c_in, h, w});
        for (double& v : image.data())
            v = rng.uniform(-1.0, 1.0);
        Tensor clip({c_in, t_len, h, w});
        for (std::size_t c = 0; c < c_in; ++c)
            for (std::size_t t = 0; t < t_len; ++t)
                for (std::size_t y = 0; y < h; ++y)
                    for (std::size_t x = 0; x < w; ++x)
                        clip({c, t, y, x}) = image({c, y, x});
        const Tensor flat = conv2d_valid(image, w2);
        const Tensor deep = conv3d_valid(clip, inflate_2d_filter(w2, kt, InflationMode::center));
        for (std::size_t o = 0; o < c_out; ++o)
            for (std::size_t t = 0; t < deep.dim(1); ++t)
                for (std::size_t y = 0; y < flat.dim(1); ++y)
                    for (std::size_t x = 0; x < flat.dim(2); ++x)
                        worst_conv = std::max(worst_conv, std::abs(deep({o, t, y, x}) - flat({o, y, x})));
    }

    const bool ok = worst_roundtrip <= 1e-9 && loss_ok && worst_roi <= 1e-6 && worst_conv <= 1e-6;
    return {ok, format("round trip %.2e (<= 1e-9), reg loss T=1 %.6f T=3 %.6f (want 0.125), RoIAlign %.2e "
                       "(<= 1e-6), inflation %.2e (<= 1e-6)",
                       worst_roundtrip, loss1, loss3, worst_roi, worst_conv)};
}

Outcome criterion_10()
{
    constexpr int kSeeds = 20;
    int ok = 0;
    std::string first_failure;
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
        const ScenarioConfig cfg = closure_suite(seed);
        const VideoSequence gt = generate_ground_truth(cfg);
        const EvalReport r = evaluate(gt, track_defaults(corrupt_to_predictions(gt, cfg)));
        auto is100 = [](double v) { return std::abs(v - 100.0) <= 1e-9; };
        const bool all = is100(r.map_total) && is100(r.mota_total) && is100(r.motp) && is100(r.precision) &&
                         is100(r.recall);
        ok += all;
        if (!all && first_failure.empty())
            first_failure = format("; seed %d: mAP %.4f MOTA %.4f MOTP %.4f Prec %.4f Rec %.4f",
                                   static_cast<int>(seed), r.map_total, r.mota_total, r.motp, r.precision,
                                   r.recall);
    }
    return {ok == kSeeds, format("all metrics 100 on %d/%d seeds", ok, kSeeds) + first_failure};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"assignment optimality", criterion_1},   {"greedy dominance", criterion_2},
        {"MOT hand fixtures", criterion_3},       {"threshold sweep trend", criterion_4},
        {"oracle ordering", criterion_5},         {"cost criteria", criterion_6},
        {"linear runtime", criterion_7},          {"lookback gap", criterion_8},
        {"tube geometry", criterion_9},           {"pipeline closure", criterion_10},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
