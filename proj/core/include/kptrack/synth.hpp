// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file synth.hpp
/// \brief Seeded synthetic scenes: stick-figure actors walking in separate
/// vertical lanes, plus a noise model that turns the ground truth into
/// detector-like predictions.
///
/// Draw order is fixed so that a seed produces byte-identical files on every
/// platform. Ground truth uses RNG stream 0 (per actor, in actor order:
/// height, appearance, motion, then per frame the occlusion draws);
/// corruption uses stream 1 and walks frames in order.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "kptrack/core_model.hpp"

namespace kptrack {

enum class MotionModel { linear, sinusoidal };

std::string_view to_string(MotionModel m);
MotionModel parse_motion_model(std::string_view name);

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    friend bool operator==(const Range&, const Range&) = default;
};

struct NoiseModel {
    double keypoint_sigma = 3.0;
    double box_sigma = 2.0;
    double miss_probability = 0.05;
    /// Mean of the Poisson number of false positives per frame.
    double fp_rate = 1.0;
    /// Chance that a kept joint lands far from its true position.
    double keypoint_outlier_probability = 0.05;
    Range tp_score{0.8, 1.0};
    Range fp_score{0.3, 0.7};
    Range keypoint_score{2.0, 4.0};
    Range outlier_keypoint_score{0.5, 1.9};
    /// Gaussian noise added to each appearance-feature component.
    double feature_sigma = 0.1;
    friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

struct ScenarioConfig {
    std::uint64_t seed = 0;
    std::size_t frames = 50;
    std::size_t actors = 4;
    int image_width = 1280;
    int image_height = 720;
    MotionModel motion = MotionModel::linear;
    /// Pixels per frame.
    Range speed{1.0, 4.0};
    Range actor_height{150.0, 300.0};
    /// Per actor and frame, chance that an occlusion span starts.
    double occlusion_probability = 0.0;
    /// Span length in frames, inclusive.
    Range occlusion_duration{2.0, 6.0};
    NoiseModel noise;
    std::size_t label_every = 1;
    /// 0 disables appearance features.
    std::size_t feature_dim = 8;
    std::string video_id = "synthetic";

    void validate() const;
    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;

    /// Defaults with every noise source switched off: predictions copy the
    /// ground truth geometry at detection score 1.
    static ScenarioConfig noiseless(std::uint64_t seed = 0);
};

/// Missing keys keep their defaults; unknown keys are rejected.
ScenarioConfig parse_scenario(std::string_view json_text);
ScenarioConfig load_scenario(const std::string& path);
std::string scenario_to_json(const ScenarioConfig& cfg);

/// Template pose of a standing person of `height` pixels whose head top is
/// at (center_x, top_y), in the PoseTrack joint order.
Pose skeleton_template(double center_x, double top_y, double height);

/// Head box: the box around the three head joints, dilated by 20%.
Box head_box_of(const Pose& pose);

VideoSequence generate_ground_truth(const ScenarioConfig& cfg);
VideoSequence corrupt_to_predictions(const VideoSequence& gt, const ScenarioConfig& cfg);

} // namespace kptrack
