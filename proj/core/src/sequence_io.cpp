// SPDX-License-Identifier: Apache-2.0
#include "kptrack/sequence_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "json_util.hpp"

namespace kptrack {

using nlohmann::json;
using detail::field;
using detail::require_array;
using detail::require_integer;
using detail::require_number;

namespace {

Box parse_box(const json& j, const std::string& path)
{
    require_array(j, path, 4);
    return Box{require_number(j[0], path + "[0]"), require_number(j[1], path + "[1]"),
               require_number(j[2], path + "[2]"), require_number(j[3], path + "[3]")};
}

json box_to_json(const Box& b)
{
    return json::array({b.x_min, b.y_min, b.x_max, b.y_max});
}

Detection parse_detection(const json& j, const std::string& path)
{
    if (!j.is_object())
        throw SchemaError(path + ": expected object");
    Detection det;
    det.box = parse_box(field(j, "bbox", path), path + ".bbox");
    det.score = std::clamp(require_number(field(j, "score", path), path + ".score"), 0.0, 1.0);

    const json& kps = field(j, "keypoints", path);
    require_array(kps, path + ".keypoints");
    det.pose.joints.reserve(kps.size());
    for (std::size_t k = 0; k < kps.size(); ++k) {
        const std::string kp_path = path + ".keypoints[" + std::to_string(k) + "]";
        require_array(kps[k], kp_path, 4);
        Keypoint kp;
        kp.x = require_number(kps[k][0], kp_path + "[0]");
        kp.y = require_number(kps[k][1], kp_path + "[1]");
        kp.score = require_number(kps[k][2], kp_path + "[2]");
        const std::int64_t present = require_integer(kps[k][3], kp_path + "[3]");
        if (present != 0 && present != 1)
            throw SchemaError(kp_path + "[3]: presence flag must be 0 or 1");
        kp.present = present == 1;
        det.pose.joints.push_back(kp);
    }

    if (auto it = j.find("feature"); it != j.end() && !it->is_null()) {
        require_array(*it, path + ".feature");
        std::vector<double> feature;
        feature.reserve(it->size());
        for (std::size_t i = 0; i < it->size(); ++i)
            feature.push_back(require_number((*it)[i], path + ".feature[" + std::to_string(i) + "]"));
        det.feature = std::move(feature);
    }
    if (auto it = j.find("track_id"); it != j.end() && !it->is_null())
        det.track_id = require_integer(*it, path + ".track_id");
    if (auto it = j.find("head_box"); it != j.end() && !it->is_null())
        det.head_box = parse_box(*it, path + ".head_box");
    return det;
}

} // namespace

VideoSequence parse_sequence(std::string_view json_text, SequenceRole role,
                             const std::optional<std::vector<std::size_t>>& joint_map)
{
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    if (!root.is_object())
        throw SchemaError("top level: expected object");

    VideoSequence seq;
    const json& id = field(root, "video_id", "top level");
    if (!id.is_string())
        throw SchemaError("video_id: expected string");
    seq.video_id = id.get<std::string>();

    const json& size = field(root, "image_size", "top level");
    require_array(size, "image_size", 2);
    seq.image_width = static_cast<int>(require_integer(size[0], "image_size[0]"));
    seq.image_height = static_cast<int>(require_integer(size[1], "image_size[1]"));

    const json& names = field(root, "joint_names", "top level");
    require_array(names, "joint_names");
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!names[i].is_string())
            throw SchemaError("joint_names[" + std::to_string(i) + "]: expected string");
        seq.joint_names.push_back(names[i].get<std::string>());
    }

    const json& frames = field(root, "frames", "top level");
    require_array(frames, "frames");
    seq.frames.reserve(frames.size());
    for (std::size_t f = 0; f < frames.size(); ++f) {
        const std::string path = "frames[" + std::to_string(f) + "]";
        const json& jf = frames[f];
        if (!jf.is_object())
            throw SchemaError(path + ": expected object");
        Frame frame;
        frame.frame_index = require_integer(field(jf, "frame_index", path), path + ".frame_index");
        const json& labeled = field(jf, "labeled", path);
        if (!labeled.is_boolean())
            throw SchemaError(path + ".labeled: expected bool");
        frame.labeled = labeled.get<bool>();
        const json& dets = field(jf, "detections", path);
        require_array(dets, path + ".detections");
        frame.detections.reserve(dets.size());
        for (std::size_t d = 0; d < dets.size(); ++d)
            frame.detections.push_back(
                parse_detection(dets[d], path + ".detections[" + std::to_string(d) + "]"));
        seq.frames.push_back(std::move(frame));
    }

    validate_sequence(seq, role);
    if (joint_map)
        permute_joints(seq, *joint_map);
    return seq;
}

VideoSequence load_sequence(const std::filesystem::path& path, SequenceRole role,
                            const std::optional<std::vector<std::size_t>>& joint_map)
{
    const std::string text = read_text_file(path);
    try {
        return parse_sequence(text, role, joint_map);
    } catch (const SchemaError& e) {
        throw SchemaError(path.string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::string serialize_sequence(const VideoSequence& seq)
{
    json root;
    root["video_id"] = seq.video_id;
    root["image_size"] = json::array({seq.image_width, seq.image_height});
    root["joint_names"] = seq.joint_names;
    json frames = json::array();
    for (const Frame& frame : seq.frames) {
        json jf;
        jf["frame_index"] = frame.frame_index;
        jf["labeled"] = frame.labeled;
        json dets = json::array();
        for (const Detection& det : frame.detections) {
            json jd;
            jd["bbox"] = box_to_json(det.box);
            jd["score"] = det.score;
            json kps = json::array();
            for (const Keypoint& k : det.pose.joints)
                kps.push_back(json::array({k.x, k.y, k.score, k.present ? 1 : 0}));
            jd["keypoints"] = std::move(kps);
            if (det.feature)
                jd["feature"] = *det.feature;
            if (det.track_id)
                jd["track_id"] = *det.track_id;
            if (det.head_box)
                jd["head_box"] = box_to_json(*det.head_box);
            dets.push_back(std::move(jd));
        }
        jf["detections"] = std::move(dets);
        frames.push_back(std::move(jf));
    }
    root["frames"] = std::move(frames);
    return root.dump() + "\n";
}

void save_sequence(const VideoSequence& seq, const std::filesystem::path& path)
{
    write_text_file_atomic(path, serialize_sequence(seq));
}

void write_text_file_atomic(const std::filesystem::path& path, std::string_view content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out)
            throw Error("failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot move output into place at " + path.string());
    }
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace kptrack
