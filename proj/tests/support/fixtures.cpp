// SPDX-License-Identifier: Apache-2.0
#include "fixtures.hpp"

namespace kptrack::testing {

Detection person(double cx, double top, double height, std::optional<TrackId> id, double score)
{
    Detection d;
    d.pose = skeleton_template(cx, top, height);
    d.box = derive_box_from_pose(d.pose);
    d.head_box = head_box_of(d.pose);
    d.track_id = id;
    d.score = score;
    return d;
}

Detection box_only(const Box& box, std::optional<TrackId> id)
{
    Detection d;
    d.box = box;
    d.pose = Pose(kDefaultJointCount);
    d.track_id = id;
    return d;
}

VideoSequence make_sequence(std::vector<std::vector<Detection>> frames, std::string video_id)
{
    VideoSequence seq;
    seq.video_id = std::move(video_id);
    seq.image_width = 1280;
    seq.image_height = 720;
    seq.joint_names = posetrack_joint_names();
    for (std::size_t t = 0; t < frames.size(); ++t)
        seq.frames.push_back(Frame{static_cast<std::int64_t>(t), true, std::move(frames[t])});
    return seq;
}

VideoSequence as_prediction(const VideoSequence& gt)
{
    VideoSequence pred = gt;
    for (Frame& f : pred.frames)
        for (Detection& d : f.detections)
            d.head_box.reset();
    return pred;
}

MotFixture mot_perfect()
{
    std::vector<std::vector<Detection>> frames;
    for (int t = 0; t < 3; ++t)
        frames.push_back({person(200.0 + 3.0 * t, 100.0, 200.0, 0)});
    MotFixture f;
    f.gt = make_sequence(frames);
    f.pred = as_prediction(f.gt);
    return f;
}

MotFixture mot_id_switch()
{
    MotFixture f = mot_perfect();
    f.pred.frames[2].detections[0].track_id = 1;
    return f;
}

MotFixture mot_fp_heavy()
{
    MotFixture f = mot_perfect();
    for (Frame& frame : f.pred.frames) {
        Detection a = person(700.0, 100.0, 200.0, 5);
        Detection b = person(1000.0, 300.0, 200.0, 6);
        a.head_box.reset();
        b.head_box.reset();
        frame.detections.push_back(a);
        frame.detections.push_back(b);
    }
    return f;
}

VideoSequence gap_fixture()
{
    std::vector<std::vector<Detection>> frames(5);
    for (int t : {0, 1, 3, 4})
        frames[t].push_back(box_only(Box{100.0 + 2.0 * t, 100.0, 150.0 + 2.0 * t, 200.0}));
    return make_sequence(frames, "gap");
}

ScenarioConfig noisy_suite(std::uint64_t seed)
{
    ScenarioConfig cfg;
    cfg.seed = seed;
    cfg.frames = 60;
    cfg.actors = 5;
    cfg.occlusion_probability = 0.02;
    cfg.noise.fp_rate = 2.0;
    cfg.motion = seed % 2 ? MotionModel::sinusoidal : MotionModel::linear;
    cfg.video_id = "noisy-" + std::to_string(seed);
    return cfg;
}

ScenarioConfig threshold_suite(std::uint64_t seed)
{
    ScenarioConfig cfg;
    cfg.seed = seed;
    cfg.frames = 60;
    cfg.actors = 4;
    cfg.noise.fp_rate = 4.0;
    cfg.noise.tp_score = {0.93, 1.0};
    cfg.noise.fp_score = {0.3, 0.94};
    cfg.video_id = "threshold-" + std::to_string(seed);
    return cfg;
}

ScenarioConfig closure_suite(std::uint64_t seed)
{
    ScenarioConfig cfg = ScenarioConfig::noiseless(seed);
    cfg.frames = 40;
    cfg.actors = 1 + seed % 6;
    cfg.motion = seed % 2 ? MotionModel::sinusoidal : MotionModel::linear;
    cfg.label_every = 1 + seed % 3;
    cfg.video_id = "closure-" + std::to_string(seed);
    return cfg;
}

std::set<TrackId> distinct_ids(const VideoSequence& seq)
{
    std::set<TrackId> ids;
    for (const Frame& f : seq.frames)
        for (const Detection& d : f.detections)
            if (d.track_id)
                ids.insert(*d.track_id);
    return ids;
}

std::vector<std::optional<TrackId>> id_list(const VideoSequence& seq)
{
    std::vector<std::optional<TrackId>> ids;
    for (const Frame& f : seq.frames)
        for (const Detection& d : f.detections)
            ids.push_back(d.track_id);
    return ids;
}

} // namespace kptrack::testing
