// SPDX-License-Identifier: Apache-2.0
#include "kptrack/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "kptrack/rng.hpp"
#include "kptrack/sequence_io.hpp"

namespace kptrack {

using nlohmann::json;

std::string_view to_string(MotionModel m)
{
    return m == MotionModel::linear ? "linear" : "sinusoidal";
}

MotionModel parse_motion_model(std::string_view name)
{
    if (name == "linear")
        return MotionModel::linear;
    if (name == "sinusoidal")
        return MotionModel::sinusoidal;
    throw ValidationError("unknown motion model \"" + std::string(name) + "\"");
}

namespace {

// (dx, dy) in units of the actor height, relative to the head top; the
// figure faces the camera, so its right side is on the image left.
constexpr std::array<std::array<double, 2>, kDefaultJointCount> kTemplate{{
    {-0.10, 1.00}, // right_ankle
    {-0.09, 0.75}, // right_knee
    {-0.08, 0.50}, // right_hip
    {0.08, 0.50},  // left_hip
    {0.09, 0.75},  // left_knee
    {0.10, 1.00},  // left_ankle
    {-0.20, 0.50}, // right_wrist
    {-0.18, 0.35}, // right_elbow
    {-0.13, 0.20}, // right_shoulder
    {0.13, 0.20},  // left_shoulder
    {0.18, 0.35},  // left_elbow
    {0.20, 0.50},  // left_wrist
    {0.00, 0.17},  // head_bottom
    {0.04, 0.09},  // nose
    {0.00, 0.00},  // head_top
}};

constexpr std::array<std::size_t, 3> kHeadJoints{12, 13, 14};
constexpr double kDilation = 0.20;
// Template extent after dilation, as multiples of the height.
constexpr double kBoxHalfWidth = 0.5 * 0.40 * (1.0 + kDilation);
constexpr double kBoxMarginY = 0.5 * kDilation;

void check_probability(double p, const char* name)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw ValidationError(std::string(name) + " must lie in [0, 1]");
}

void check_range(const Range& r, const char* name, double min_lo)
{
    if (!(r.lo >= min_lo && r.lo <= r.hi) || !std::isfinite(r.hi))
        throw ValidationError(std::string(name) + " must satisfy " + std::to_string(min_lo) + " <= lo <= hi");
}

double reflect(double p, double lo, double hi, double& velocity)
{
    if (hi <= lo)
        return lo;
    for (int guard = 0; guard < 64 && (p < lo || p > hi); ++guard) {
        if (p < lo)
            p = 2.0 * lo - p;
        else
            p = 2.0 * hi - p;
        velocity = -velocity;
    }
    return std::clamp(p, lo, hi);
}

std::vector<double> unit_feature(Rng& rng, std::size_t dim)
{
    std::vector<double> f(dim);
    double norm = 0.0;
    for (double& v : f) {
        v = rng.normal();
        norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm > 0.0)
        for (double& v : f)
            v /= norm;
    return f;
}

struct Actor {
    double height = 0.0;
    std::vector<double> feature;
    double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
    double x = 0.0, y = 0.0;
    double vx = 0.0, vy = 0.0;
    double amplitude = 0.0, omega = 0.0, phase = 0.0, x_mid = 0.0;
    std::size_t occluded_left = 0;
};

class JsonReader {
public:
    JsonReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path))
    {
        if (!obj_.is_object())
            throw SchemaError(path_ + ": expected object");
    }

    const json* get(const char* key)
    {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    void number(const char* key, double& out)
    {
        if (const json* j = get(key))
            out = detail::require_number(*j, sub(key));
    }

    template <typename Int>
    void integer(const char* key, Int& out)
    {
        if (const json* j = get(key)) {
            const std::int64_t v = detail::require_integer(*j, sub(key));
            if (v < 0)
                throw SchemaError(sub(key) + ": expected non-negative integer");
            out = static_cast<Int>(v);
        }
    }

    void range(const char* key, Range& out)
    {
        if (const json* j = get(key)) {
            detail::require_array(*j, sub(key), 2);
            out.lo = detail::require_number((*j)[0], sub(key) + "[0]");
            out.hi = detail::require_number((*j)[1], sub(key) + "[1]");
        }
    }

    void finish() const
    {
        for (const auto& item : obj_.items())
            if (!seen_.count(item.key()))
                throw SchemaError(path_ + ": unknown field \"" + item.key() + "\"");
    }

    std::string sub(const char* key) const { return path_ + "." + key; }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

json range_json(const Range& r)
{
    return json::array({r.lo, r.hi});
}

} // namespace

void ScenarioConfig::validate() const
{
    if (frames < 1)
        throw ValidationError("frames must be at least 1");
    if (image_width <= 0 || image_height <= 0)
        throw ValidationError("image size must be positive");
    if (label_every < 1)
        throw ValidationError("label_every must be at least 1");
    check_range(speed, "speed", 0.0);
    check_range(actor_height, "actor_height", 1e-6);
    check_probability(occlusion_probability, "occlusion_probability");
    check_range(occlusion_duration, "occlusion_duration", 1.0);
    check_probability(noise.miss_probability, "miss_probability");
    check_probability(noise.keypoint_outlier_probability, "keypoint_outlier_probability");
    if (!(noise.keypoint_sigma >= 0.0) || !(noise.box_sigma >= 0.0) || !(noise.feature_sigma >= 0.0))
        throw ValidationError("noise sigmas must be non-negative");
    if (!(noise.fp_rate >= 0.0) || !std::isfinite(noise.fp_rate))
        throw ValidationError("fp_rate must be non-negative");
    check_range(noise.tp_score, "tp_score", 0.0);
    check_range(noise.fp_score, "fp_score", 0.0);
    if (noise.tp_score.hi > 1.0 || noise.fp_score.hi > 1.0)
        throw ValidationError("detection scores must lie in [0, 1]");
    check_range(noise.keypoint_score, "keypoint_score", 0.0);
    check_range(noise.outlier_keypoint_score, "outlier_keypoint_score", 0.0);
}

ScenarioConfig ScenarioConfig::noiseless(std::uint64_t seed)
{
    ScenarioConfig cfg;
    cfg.seed = seed;
    cfg.noise.keypoint_sigma = 0.0;
    cfg.noise.box_sigma = 0.0;
    cfg.noise.miss_probability = 0.0;
    cfg.noise.fp_rate = 0.0;
    cfg.noise.keypoint_outlier_probability = 0.0;
    cfg.noise.tp_score = {1.0, 1.0};
    cfg.noise.feature_sigma = 0.0;
    return cfg;
}

ScenarioConfig parse_scenario(std::string_view json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("scenario: ") + e.what());
    }

    ScenarioConfig cfg;
    JsonReader r(doc, "scenario");
    r.integer("seed", cfg.seed);
    r.integer("frames", cfg.frames);
    r.integer("actors", cfg.actors);
    r.integer("image_width", cfg.image_width);
    r.integer("image_height", cfg.image_height);
    if (const json* m = r.get("motion")) {
        if (!m->is_string())
            throw SchemaError(r.sub("motion") + ": expected string");
        cfg.motion = parse_motion_model(m->get<std::string>());
    }
    r.range("speed", cfg.speed);
    r.range("actor_height", cfg.actor_height);
    r.number("occlusion_probability", cfg.occlusion_probability);
    r.range("occlusion_duration", cfg.occlusion_duration);
    r.integer("label_every", cfg.label_every);
    r.integer("feature_dim", cfg.feature_dim);
    if (const json* v = r.get("video_id")) {
        if (!v->is_string())
            throw SchemaError(r.sub("video_id") + ": expected string");
        cfg.video_id = v->get<std::string>();
    }
    if (const json* n = r.get("noise")) {
        NoiseModel& nm = cfg.noise;
        JsonReader nr(*n, r.sub("noise"));
        nr.number("keypoint_sigma", nm.keypoint_sigma);
        nr.number("box_sigma", nm.box_sigma);
        nr.number("miss_probability", nm.miss_probability);
        nr.number("fp_rate", nm.fp_rate);
        nr.number("keypoint_outlier_probability", nm.keypoint_outlier_probability);
        nr.range("tp_score", nm.tp_score);
        nr.range("fp_score", nm.fp_score);
        nr.range("keypoint_score", nm.keypoint_score);
        nr.range("outlier_keypoint_score", nm.outlier_keypoint_score);
        nr.number("feature_sigma", nm.feature_sigma);
        nr.finish();
    }
    r.finish();
    cfg.validate();
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path)
{
    return parse_scenario(read_text_file(path));
}

std::string scenario_to_json(const ScenarioConfig& cfg)
{
    const NoiseModel& n = cfg.noise;
    nlohmann::ordered_json j;
    j["seed"] = cfg.seed;
    j["frames"] = cfg.frames;
    j["actors"] = cfg.actors;
    j["image_width"] = cfg.image_width;
    j["image_height"] = cfg.image_height;
    j["motion"] = std::string(to_string(cfg.motion));
    j["speed"] = range_json(cfg.speed);
    j["actor_height"] = range_json(cfg.actor_height);
    j["occlusion_probability"] = cfg.occlusion_probability;
    j["occlusion_duration"] = range_json(cfg.occlusion_duration);
    j["label_every"] = cfg.label_every;
    j["feature_dim"] = cfg.feature_dim;
    j["video_id"] = cfg.video_id;
    j["noise"] = {
        {"keypoint_sigma", n.keypoint_sigma},
        {"box_sigma", n.box_sigma},
        {"miss_probability", n.miss_probability},
        {"fp_rate", n.fp_rate},
        {"keypoint_outlier_probability", n.keypoint_outlier_probability},
        {"tp_score", range_json(n.tp_score)},
        {"fp_score", range_json(n.fp_score)},
        {"keypoint_score", range_json(n.keypoint_score)},
        {"outlier_keypoint_score", range_json(n.outlier_keypoint_score)},
        {"feature_sigma", n.feature_sigma},
    };
    return j.dump(2) + "\n";
}

Pose skeleton_template(double center_x, double top_y, double height)
{
    Pose pose(kDefaultJointCount);
    for (std::size_t k = 0; k < kDefaultJointCount; ++k)
        pose[k] = Keypoint{center_x + kTemplate[k][0] * height, top_y + kTemplate[k][1] * height, 1.0, true};
    return pose;
}

Box head_box_of(const Pose& pose)
{
    Pose head(pose.size());
    for (std::size_t k : kHeadJoints)
        if (k < pose.size())
            head[k] = pose[k];
    return derive_box_from_pose(head, kDilation);
}

VideoSequence generate_ground_truth(const ScenarioConfig& cfg)
{
    cfg.validate();
    Rng rng = Rng::stream(cfg.seed, 0);

    VideoSequence seq;
    seq.video_id = cfg.video_id;
    seq.image_width = cfg.image_width;
    seq.image_height = cfg.image_height;
    seq.joint_names = posetrack_joint_names();

    const double width = cfg.image_width;
    const double height = cfg.image_height;
    const double lane = cfg.actors ? width / static_cast<double>(cfg.actors) : width;
    const double max_height = std::min(0.9 * lane / (2.0 * kBoxHalfWidth), height / (1.0 + 2.0 * kBoxMarginY));

    std::vector<Actor> actors(cfg.actors);
    for (std::size_t i = 0; i < actors.size(); ++i) {
        Actor& a = actors[i];
        a.height = std::min(rng.uniform(cfg.actor_height.lo, cfg.actor_height.hi), max_height);
        if (cfg.feature_dim)
            a.feature = unit_feature(rng, cfg.feature_dim);
        const double lane_lo = static_cast<double>(i) * lane;
        a.x_lo = lane_lo + kBoxHalfWidth * a.height;
        a.x_hi = lane_lo + lane - kBoxHalfWidth * a.height;
        a.y_lo = kBoxMarginY * a.height;
        a.y_hi = height - (1.0 + kBoxMarginY) * a.height;
        a.x = rng.uniform(a.x_lo, a.x_hi);
        a.y = rng.uniform(a.y_lo, a.y_hi);
        const double speed = rng.uniform(cfg.speed.lo, cfg.speed.hi);
        const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
        if (cfg.motion == MotionModel::linear) {
            a.vx = speed * std::cos(angle);
            a.vy = speed * std::sin(angle);
        } else {
            a.x_mid = 0.5 * (a.x_lo + a.x_hi);
            a.amplitude = 0.5 * (a.x_hi - a.x_lo);
            a.omega = a.amplitude > 0.0 ? speed / a.amplitude : 0.0;
            a.phase = angle;
        }
    }

    seq.frames.resize(cfg.frames);
    for (std::size_t t = 0; t < cfg.frames; ++t) {
        Frame& frame = seq.frames[t];
        frame.frame_index = static_cast<std::int64_t>(t);
        frame.labeled = t % cfg.label_every == 0;
        for (std::size_t i = 0; i < actors.size(); ++i) {
            Actor& a = actors[i];
            if (cfg.motion == MotionModel::sinusoidal) {
                a.x = a.x_mid + a.amplitude * std::sin(a.omega * static_cast<double>(t) + a.phase);
            } else if (t > 0) {
                a.x = reflect(a.x + a.vx, a.x_lo, a.x_hi, a.vx);
                a.y = reflect(a.y + a.vy, a.y_lo, a.y_hi, a.vy);
            }
            const bool starts = rng.bernoulli(cfg.occlusion_probability);
            if (a.occluded_left == 0 && starts)
                a.occluded_left = static_cast<std::size_t>(rng.uniform_int(
                    static_cast<std::int64_t>(cfg.occlusion_duration.lo),
                    static_cast<std::int64_t>(cfg.occlusion_duration.hi)));
            if (a.occluded_left > 0) {
                --a.occluded_left;
                continue;
            }

            Detection det;
            det.pose = skeleton_template(a.x, a.y, a.height);
            det.box = derive_box_from_pose(det.pose, kDilation);
            det.head_box = head_box_of(det.pose);
            det.score = 1.0;
            det.track_id = static_cast<TrackId>(i);
            if (!a.feature.empty())
                det.feature = a.feature;
            frame.detections.push_back(std::move(det));
        }
    }
    return seq;
}

VideoSequence corrupt_to_predictions(const VideoSequence& gt, const ScenarioConfig& cfg)
{
    cfg.validate();
    const NoiseModel& n = cfg.noise;
    Rng rng = Rng::stream(cfg.seed, 1);

    VideoSequence out;
    out.video_id = gt.video_id;
    out.image_width = gt.image_width;
    out.image_height = gt.image_height;
    out.joint_names = gt.joint_names;
    out.frames.reserve(gt.frames.size());

    auto jitter_pose = [&](Pose& pose, double person_height) {
        for (Keypoint& k : pose.joints) {
            if (!k.present)
                continue;
            k.x += rng.normal(0.0, n.keypoint_sigma);
            k.y += rng.normal(0.0, n.keypoint_sigma);
            if (rng.bernoulli(n.keypoint_outlier_probability)) {
                k.x += rng.normal(0.0, 0.2 * person_height);
                k.y += rng.normal(0.0, 0.2 * person_height);
                k.score = rng.uniform(n.outlier_keypoint_score.lo, n.outlier_keypoint_score.hi);
            } else {
                k.score = rng.uniform(n.keypoint_score.lo, n.keypoint_score.hi);
            }
        }
    };
    auto jitter_box = [&](const Pose& pose) {
        Box b = derive_box_from_pose(pose, kDilation);
        b.x_min += rng.normal(0.0, n.box_sigma);
        b.y_min += rng.normal(0.0, n.box_sigma);
        b.x_max += rng.normal(0.0, n.box_sigma);
        b.y_max += rng.normal(0.0, n.box_sigma);
        if (b.x_min > b.x_max)
            std::swap(b.x_min, b.x_max);
        if (b.y_min > b.y_max)
            std::swap(b.y_min, b.y_max);
        return b;
    };
    auto noisy_feature = [&](const std::vector<double>& f) {
        std::vector<double> g = f;
        for (double& v : g)
            v += rng.normal(0.0, n.feature_sigma);
        return g;
    };

    const double width = gt.image_width;
    const double height = gt.image_height;
    for (const Frame& src : gt.frames) {
        Frame frame;
        frame.frame_index = src.frame_index;
        frame.labeled = src.labeled;
        for (const Detection& g : src.detections) {
            if (rng.bernoulli(n.miss_probability))
                continue;
            Detection det;
            det.pose = g.pose;
            jitter_pose(det.pose, g.box.height() / (1.0 + kDilation));
            det.box = jitter_box(det.pose);
            det.score = rng.uniform(n.tp_score.lo, n.tp_score.hi);
            if (g.feature)
                det.feature = noisy_feature(*g.feature);
            frame.detections.push_back(std::move(det));
        }

        const std::int64_t false_positives = rng.poisson(n.fp_rate);
        for (std::int64_t f = 0; f < false_positives; ++f) {
            const double h = std::min(rng.uniform(cfg.actor_height.lo, cfg.actor_height.hi), 0.8 * height);
            const double cx = rng.uniform(0.0, width);
            const double top = rng.uniform(0.0, std::max(0.0, height - h));
            Detection det;
            det.pose = skeleton_template(cx, top, h);
            jitter_pose(det.pose, h);
            det.box = jitter_box(det.pose);
            det.score = rng.uniform(n.fp_score.lo, n.fp_score.hi);
            if (cfg.feature_dim)
                det.feature = unit_feature(rng, cfg.feature_dim);
            frame.detections.push_back(std::move(det));
        }

        for (std::size_t i = frame.detections.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(frame.detections[i - 1], frame.detections[j]);
        }
        out.frames.push_back(std::move(frame));
    }
    return out;
}

} // namespace kptrack
