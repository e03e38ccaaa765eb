// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "kptrack/rng.hpp"
#include "kptrack/sequence_io.hpp"

using namespace kptrack;
using namespace kptrack::testing;

namespace {

class SequenceIoFiles : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = std::filesystem::temp_directory_path() /
               ("kptrack_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        std::filesystem::remove_all(dir_);
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }

    std::filesystem::path dir_;
};

constexpr const char* kMinimal = R"({
  "video_id": "v1",
  "image_size": [640, 480],
  "joint_names": ["a", "b"],
  "frames": [
    {"frame_index": 0, "labeled": true,
     "detections": [{"bbox": [1, 2, 30, 40], "score": 0.9,
                     "keypoints": [[5, 6, 2.5, 1], [0, 0, 0, 0]]}]}
  ]
})";

} // namespace

TEST(ParseSequence, MinimalFile)
{
    const VideoSequence seq = parse_sequence(kMinimal, SequenceRole::prediction);
    EXPECT_EQ(seq.video_id, "v1");
    EXPECT_EQ(seq.image_width, 640);
    ASSERT_EQ(seq.frames.size(), 1u);
    ASSERT_EQ(seq.frames[0].detections.size(), 1u);
    const Detection& d = seq.frames[0].detections[0];
    EXPECT_EQ(d.box, (Box{1, 2, 30, 40}));
    EXPECT_DOUBLE_EQ(d.pose[0].score, 2.5);
    EXPECT_TRUE(d.pose[0].present);
    EXPECT_FALSE(d.pose[1].present);
    EXPECT_FALSE(d.track_id.has_value());
}

TEST(ParseSequence, IdentityJointMapIsNoOp)
{
    EXPECT_EQ(parse_sequence(kMinimal, SequenceRole::prediction, std::vector<std::size_t>{0, 1}),
              parse_sequence(kMinimal, SequenceRole::prediction));
}

TEST(ParseSequence, SwapJointMap)
{
    const VideoSequence seq = parse_sequence(kMinimal, SequenceRole::prediction, std::vector<std::size_t>{1, 0});
    EXPECT_EQ(seq.joint_names, (std::vector<std::string>{"b", "a"}));
    EXPECT_TRUE(seq.frames[0].detections[0].pose[1].present);
}

TEST(ParseSequence, ClampsDetectionScore)
{
    std::string text = kMinimal;
    text.replace(text.find("0.9"), 3, "1.7");
    EXPECT_DOUBLE_EQ(parse_sequence(text, SequenceRole::prediction).frames[0].detections[0].score, 1.0);
}

TEST(ParseSequence, MissingFieldIsNamed)
{
    std::string text = kMinimal;
    text.replace(text.find("\"bbox\""), 6, "\"bbax\"");
    try {
        parse_sequence(text, SequenceRole::prediction);
        FAIL() << "expected an error";
    } catch (const SchemaError& e) {
        EXPECT_NE(std::string(e.what()).find("missing field \"bbox\""), std::string::npos) << e.what();
    }
}

TEST(ParseSequence, WrongTypeAndMalformedJson)
{
    std::string text = kMinimal;
    text.replace(text.find("0.9"), 3, "\"x\"");
    EXPECT_THROW(parse_sequence(text, SequenceRole::prediction), SchemaError);
    EXPECT_THROW(parse_sequence("{", SequenceRole::prediction), SchemaError);
}

TEST(ParseSequence, NonMonotoneFrames)
{
    const std::string text = R"({"video_id": "v", "image_size": [1, 1], "joint_names": [], "frames": [
        {"frame_index": 0, "labeled": true, "detections": []},
        {"frame_index": 2, "labeled": true, "detections": []},
        {"frame_index": 1, "labeled": true, "detections": []}]})";
    try {
        parse_sequence(text, SequenceRole::prediction);
        FAIL() << "expected an error";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("non-monotone frames"), std::string::npos);
    }
}

TEST(ParseSequence, GroundTruthWithoutTrackId)
{
    EXPECT_THROW(parse_sequence(kMinimal, SequenceRole::groundtruth), ValidationError);
}

TEST_F(SequenceIoFiles, RoundTripThreeFramesTwoPersons)
{
    VideoSequence seq = make_sequence({{person(100, 50, 120, 0), person(400, 60, 150, 1)},
                                       {person(104, 52, 120, 0), person(398, 61, 150, 1)},
                                       {person(109, 53, 120, 0), person(395, 63, 150, 1)}});
    seq.frames[1].labeled = false;
    seq.frames[2].detections[1].pose[4].present = false;
    const auto path = dir_ / "seq.json";
    save_sequence(seq, path);
    EXPECT_EQ(load_sequence(path, SequenceRole::groundtruth), seq);
}

TEST_F(SequenceIoFiles, EmptyFramesRoundTrip)
{
    VideoSequence seq = make_sequence({});
    const auto path = dir_ / "empty.json";
    save_sequence(seq, path);
    EXPECT_EQ(load_sequence(path, SequenceRole::prediction), seq);
}

TEST_F(SequenceIoFiles, FeaturesKeepFullPrecision)
{
    Rng rng(11);
    Detection d = person(100, 50, 120);
    d.feature = std::vector<double>{};
    for (int i = 0; i < 16; ++i)
        d.feature->push_back(rng.normal());
    d.feature->push_back(0.1 + 0.2);
    d.score = 1.0 / 3.0;
    const VideoSequence seq = make_sequence({{d}});
    const auto path = dir_ / "feat.json";
    save_sequence(seq, path);
    EXPECT_EQ(load_sequence(path, SequenceRole::prediction), seq);
}

TEST_F(SequenceIoFiles, RandomSequencesRoundTripExactly)
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        ScenarioConfig cfg;
        cfg.seed = seed;
        cfg.frames = 8;
        const VideoSequence gt = generate_ground_truth(cfg);
        const VideoSequence pred = corrupt_to_predictions(gt, cfg);
        save_sequence(gt, dir_ / "gt.json");
        save_sequence(pred, dir_ / "pred.json");
        EXPECT_EQ(load_sequence(dir_ / "gt.json", SequenceRole::groundtruth), gt);
        EXPECT_EQ(load_sequence(dir_ / "pred.json", SequenceRole::prediction), pred);
    }
}

TEST_F(SequenceIoFiles, AtomicWriteLeavesNoTemporary)
{
    const auto path = dir_ / "out.txt";
    write_text_file_atomic(path, "hello");
    EXPECT_EQ(read_text_file(path), "hello");
    EXPECT_FALSE(std::filesystem::exists(dir_ / "out.txt.tmp"));
}

TEST_F(SequenceIoFiles, UnwritablePathThrows)
{
    EXPECT_THROW(save_sequence(make_sequence({}), dir_ / "missing" / "x.json"), Error);
}

TEST_F(SequenceIoFiles, MissingFileThrows)
{
    EXPECT_THROW(load_sequence(dir_ / "nope.json", SequenceRole::prediction), Error);
}
