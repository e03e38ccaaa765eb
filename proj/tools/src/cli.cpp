// SPDX-License-Identifier: Apache-2.0
#include "kptrack_tools/cli.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kptrack/linker.hpp"
#include "kptrack/metrics.hpp"
#include "kptrack/oracles.hpp"
#include "kptrack/report_io.hpp"
#include "kptrack/sequence_io.hpp"
#include "kptrack/synth.hpp"
#include "kptrack/tube_geometry.hpp"
#include "kptrack_tools/bench.hpp"
#include "kptrack_tools/manifest.hpp"

namespace kptrack::cli {

using ojson = nlohmann::ordered_json;

unsigned default_thread_count()
{
    if (const char* env = std::getenv("KPTRACK_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string fmt_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

RunManifest new_manifest(std::string command, const ojson& config)
{
    RunManifest m;
    m.command = std::move(command);
    m.config_json = config.dump();
    m.tool_version = KPTRACK_VERSION;
    return m;
}

// Options shared by track and sweep.
struct LinkOptions {
    std::string cost = "iou";
    std::string algo = "hungarian";
    double det_thresh = 0.95;
    double kp_thresh = 1.95;
    double min_sim = 0.0;
    int lookback = 1;
    std::uint64_t seed = 0;
    std::vector<double> weights{1.0, 1.0, 1.0};
    double pckh_norm_scale = 0.1;
    std::int64_t random_max_id = 1000;
    std::string external;
};

void add_link_options(CLI::App* app, LinkOptions& o, bool single_config)
{
    if (single_config) {
        app->add_option("--cost", o.cost, "iou | pckh | feat | combined | external")->capture_default_str();
        app->add_option("--algo", o.algo, "hungarian | greedy | random")->capture_default_str();
        app->add_option("--det-thresh", o.det_thresh, "Detection score cut-off")->capture_default_str();
    }
    app->add_option("--kp-thresh", o.kp_thresh, "Keypoint score cut-off")->capture_default_str();
    app->add_option("--min-sim", o.min_sim, "Links need a similarity strictly above this")->capture_default_str();
    app->add_option("--lookback", o.lookback, "Frames a track stays matchable")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--seed", o.seed, "Seed of the random-id baseline")->capture_default_str();
    app->add_option("--weights", o.weights, "Combined-criterion weights iou,pckh,cosine")
        ->delimiter(',')
        ->expected(3)
        ->capture_default_str();
    app->add_option("--pckh-norm-scale", o.pckh_norm_scale, "Pose similarity normalizer, fraction of box diagonal")
        ->capture_default_str();
    app->add_option("--random-max-id", o.random_max_id, "Upper bound of random ids")->capture_default_str();
    app->add_option("--external", o.external, "Per-edge similarity file for --cost external");
}

LinkerConfig make_linker(const LinkOptions& o, const std::string& algo, const std::string& cost,
                         const std::shared_ptr<const ExternalScores>& external)
{
    LinkerConfig cfg;
    cfg.algorithm = parse_match_algorithm(algo);
    cfg.criterion.kind = parse_similarity_kind(cost);
    cfg.criterion.weights = {o.weights.at(0), o.weights.at(1), o.weights.at(2)};
    cfg.criterion.pckh_norm_scale = o.pckh_norm_scale;
    cfg.criterion.external = external;
    cfg.min_similarity = o.min_sim;
    cfg.lookback = o.lookback;
    cfg.random_max_id = o.random_max_id;
    cfg.rng_seed = o.seed;
    if (cfg.criterion.kind == SimilarityKind::external && !external)
        throw UsageError("--cost external needs --external PATH");
    cfg.validate();
    return cfg;
}

std::shared_ptr<const ExternalScores> load_external(const LinkOptions& o)
{
    if (o.external.empty())
        return nullptr;
    return std::make_shared<const ExternalScores>(ExternalScores::load(o.external));
}

ojson link_options_json(const LinkOptions& o)
{
    ojson j;
    j["kp_thresh"] = o.kp_thresh;
    j["min_similarity"] = o.min_sim;
    j["lookback"] = o.lookback;
    j["seed"] = o.seed;
    j["weights"] = o.weights;
    j["pckh_norm_scale"] = o.pckh_norm_scale;
    j["random_max_id"] = o.random_max_id;
    if (!o.external.empty())
        j["external"] = o.external;
    return j;
}

// ---------------------------------------------------------------- track

struct TrackArgs {
    std::string pred, out;
    LinkOptions link;
};

int cmd_track(const TrackArgs& a, std::ostream& out)
{
    ojson config = link_options_json(a.link);
    config["cost"] = a.link.cost;
    config["algo"] = a.link.algo;
    config["det_thresh"] = a.link.det_thresh;
    RunManifest manifest = new_manifest("track", config);
    manifest.inputs.emplace_back("pred", a.pred);
    manifest.outputs.emplace_back("tracked", a.out);
    StageTimer timer(manifest);

    const LinkerConfig cfg = make_linker(a.link, a.link.algo, a.link.cost, load_external(a.link));
    const VideoSequence pred = load_sequence(a.pred, SequenceRole::prediction);
    timer.lap("load");
    const VideoSequence kept = filter_detections(pred, a.link.det_thresh, a.link.kp_thresh);
    TrackStats stats;
    const VideoSequence tracked = track_video(kept, cfg, &stats);
    timer.lap("track");
    save_sequence(tracked, a.out);
    timer.lap("save");
    write_manifest(manifest, a.out);

    out << "tracked " << tracked.detection_count() << " detections into " << stats.tracks
        << " tracks (assignment cost " << fmt_number(stats.assignment_cost) << ")\n";
    return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
    std::string gt, pred, report, csv;
    double alpha = kDefaultPckhAlpha;
};

int cmd_eval(const EvalArgs& a, std::ostream& out)
{
    RunManifest manifest = new_manifest("eval", ojson{{"alpha", a.alpha}});
    manifest.inputs.emplace_back("gt", a.gt);
    manifest.inputs.emplace_back("pred", a.pred);
    manifest.outputs.emplace_back("report", a.report);
    if (!a.csv.empty())
        manifest.outputs.emplace_back("csv", a.csv);
    StageTimer timer(manifest);

    const VideoSequence gt = load_sequence(a.gt, SequenceRole::groundtruth);
    const VideoSequence pred = load_sequence(a.pred, SequenceRole::prediction);
    timer.lap("load");
    const EvalReport report = evaluate(gt, pred, a.alpha);
    timer.lap("evaluate");
    write_text_file_atomic(a.report, report_to_json(report));
    write_manifest(manifest, a.report);
    if (!a.csv.empty()) {
        write_text_file_atomic(a.csv, report_csv_header({}) + report_csv_row(report, {}));
        write_manifest(manifest, a.csv);
    }
    out << report_summary(report) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
    std::string gt, pred, out;
    std::vector<double> thresholds;
    std::vector<std::string> algos;
    std::vector<std::string> costs;
    double alpha = kDefaultPckhAlpha;
    unsigned threads = 0;
    LinkOptions link;
};

struct SweepRow {
    double det_thresh = 0.0;
    std::string algo, cost;
    TrackStats stats;
    EvalReport report;
};

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn)
{
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < count; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

int cmd_sweep(SweepArgs a, std::ostream& out)
{
    if (a.thresholds.empty() && a.algos.empty() && a.costs.empty())
        throw UsageError("sweep needs at least one of --thresholds, --algos, --costs");
    if (a.thresholds.empty())
        a.thresholds = {a.link.det_thresh};
    if (a.algos.empty())
        a.algos = {a.link.algo};
    if (a.costs.empty())
        a.costs = {a.link.cost};

    const auto external = load_external(a.link);
    std::vector<SweepRow> rows;
    std::vector<LinkerConfig> configs;
    for (double th : a.thresholds)
        for (const auto& algo : a.algos)
            for (const auto& cost : a.costs) {
                configs.push_back(make_linker(a.link, algo, cost, external));
                rows.push_back(SweepRow{th, algo, cost, {}, {}});
            }

    ojson config = link_options_json(a.link);
    config["thresholds"] = a.thresholds;
    config["algos"] = a.algos;
    config["costs"] = a.costs;
    config["alpha"] = a.alpha;
    RunManifest manifest = new_manifest("sweep", config);
    manifest.inputs.emplace_back("gt", a.gt);
    manifest.inputs.emplace_back("pred", a.pred);
    manifest.outputs.emplace_back("csv", a.out);
    StageTimer timer(manifest);

    const VideoSequence gt = load_sequence(a.gt, SequenceRole::groundtruth);
    const VideoSequence pred = load_sequence(a.pred, SequenceRole::prediction);
    timer.lap("load");

    const unsigned threads = a.threads ? a.threads : default_thread_count();
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        SweepRow& row = rows[i];
        const VideoSequence kept = filter_detections(pred, row.det_thresh, a.link.kp_thresh);
        const VideoSequence tracked = track_video(kept, configs[i], &row.stats);
        row.report = evaluate(gt, tracked, a.alpha);
    });
    timer.lap("sweep");

    std::string csv =
        report_csv_header({"det_thresh", "algo", "cost", "assignment_cost", "links", "tracks"});
    for (const SweepRow& row : rows) {
        csv += report_csv_row(row.report, {fmt_number(row.det_thresh), row.algo, row.cost,
                                           fmt_number(row.stats.assignment_cost), std::to_string(row.stats.links),
                                           std::to_string(row.stats.tracks)});
        out << "det_thresh " << fmt_number(row.det_thresh) << " algo " << row.algo << " cost " << row.cost
            << ": " << report_summary(row.report) << "\n";
    }
    write_text_file_atomic(a.out, csv);
    timer.lap("save");
    write_manifest(manifest, a.out);
    return kExitOk;
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
    std::string gt, pred, out, mode;
    double alpha = kDefaultPckhAlpha;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out)
{
    const OracleMode mode = parse_oracle_mode(a.mode);
    RunManifest manifest = new_manifest("oracle", ojson{{"mode", std::string(to_string(mode))}, {"alpha", a.alpha}});
    manifest.inputs.emplace_back("gt", a.gt);
    manifest.inputs.emplace_back("pred", a.pred);
    manifest.outputs.emplace_back("pred", a.out);
    StageTimer timer(manifest);

    const VideoSequence gt = load_sequence(a.gt, SequenceRole::groundtruth);
    const VideoSequence pred = load_sequence(a.pred, SequenceRole::prediction);
    timer.lap("load");
    const VideoSequence transformed = apply_oracle(gt, pred, mode, a.alpha);
    timer.lap("oracle");
    save_sequence(transformed, a.out);
    write_manifest(manifest, a.out);
    out << "applied " << to_string(mode) << " oracle to " << transformed.detection_count() << " detections\n";
    return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    std::string config, gt_out, pred_out;
    bool noiseless = false;
    ScenarioConfig scenario;
    std::string motion = "linear";
};

int cmd_synth(const SynthArgs& a, const CLI::App& app, std::ostream& out)
{
    ScenarioConfig cfg = a.noiseless ? ScenarioConfig::noiseless() : ScenarioConfig{};
    if (!a.config.empty())
        cfg = load_scenario(a.config);
    auto given = [&](const char* name) { return app.count(name) > 0; };
    const ScenarioConfig& f = a.scenario;
    if (given("--seed"))
        cfg.seed = f.seed;
    if (given("--frames"))
        cfg.frames = f.frames;
    if (given("--actors"))
        cfg.actors = f.actors;
    if (given("--width"))
        cfg.image_width = f.image_width;
    if (given("--height"))
        cfg.image_height = f.image_height;
    if (given("--motion"))
        cfg.motion = parse_motion_model(a.motion);
    if (given("--occlusion"))
        cfg.occlusion_probability = f.occlusion_probability;
    if (given("--label-every"))
        cfg.label_every = f.label_every;
    if (given("--feature-dim"))
        cfg.feature_dim = f.feature_dim;
    if (given("--kp-sigma"))
        cfg.noise.keypoint_sigma = f.noise.keypoint_sigma;
    if (given("--box-sigma"))
        cfg.noise.box_sigma = f.noise.box_sigma;
    if (given("--miss"))
        cfg.noise.miss_probability = f.noise.miss_probability;
    if (given("--fp-rate"))
        cfg.noise.fp_rate = f.noise.fp_rate;
    if (given("--outliers"))
        cfg.noise.keypoint_outlier_probability = f.noise.keypoint_outlier_probability;
    cfg.validate();

    RunManifest manifest = new_manifest("synth", ojson::parse(scenario_to_json(cfg)));
    if (!a.config.empty())
        manifest.inputs.emplace_back("scenario", a.config);
    manifest.outputs.emplace_back("gt", a.gt_out);
    manifest.outputs.emplace_back("pred", a.pred_out);
    StageTimer timer(manifest);

    const VideoSequence gt = generate_ground_truth(cfg);
    const VideoSequence pred = corrupt_to_predictions(gt, cfg);
    timer.lap("generate");
    save_sequence(gt, a.gt_out);
    save_sequence(pred, a.pred_out);
    timer.lap("save");
    write_manifest(manifest, a.gt_out);
    write_manifest(manifest, a.pred_out);
    out << "wrote " << gt.detection_count() << " ground-truth and " << pred.detection_count()
        << " predicted detections over " << gt.frames.size() << " frames\n";
    return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
    std::vector<std::size_t> frames{100, 200, 400};
    std::size_t actors = 10;
    std::uint64_t seed = 0;
    int repeats = 15;
    std::string out;
};

int cmd_bench(const BenchArgs& a, std::ostream& out)
{
    const BenchResult r = bench_tracking(a.frames, a.actors, a.seed, a.repeats);
    ojson points = ojson::array();
    char line[128];
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const BenchPoint& p = r.points[i];
        std::snprintf(line, sizeof line, "frames %6zu  %10.6f s", p.frames, p.seconds);
        out << line;
        ojson entry{{"frames", p.frames}, {"seconds", p.seconds}};
        if (i > 0 && r.points[i - 1].seconds > 0.0) {
            const double ratio = p.seconds / r.points[i - 1].seconds;
            std::snprintf(line, sizeof line, "  ratio %.3f", ratio);
            out << line;
            entry["ratio"] = ratio;
        }
        out << "\n";
        points.push_back(entry);
    }
    if (r.points.size() >= 2) {
        std::snprintf(line, sizeof line, "linear fit: %.3g s/frame, R^2 %.4f\n", r.fit.slope, r.fit.r_squared);
        out << line;
    }
    if (!a.out.empty()) {
        ojson config{{"frames", a.frames}, {"actors", a.actors}, {"seed", a.seed}, {"repeats", a.repeats}};
        ojson doc{{"points", points}, {"slope", r.fit.slope}, {"intercept", r.fit.intercept},
                  {"r_squared", r.fit.r_squared}};
        write_text_file_atomic(a.out, doc.dump(2) + "\n");
        RunManifest manifest = new_manifest("bench", config);
        manifest.outputs.emplace_back("results", a.out);
        write_manifest(manifest, a.out);
    }
    return kExitOk;
}

// ---------------------------------------------------------------- anchors

struct AnchorArgs {
    int width = 640;
    int height = 480;
    std::size_t clip_length = 3;
    tube::AnchorGrid grid;
    std::string out;
};

int cmd_anchors(const AnchorArgs& a, std::ostream& out)
{
    const auto anchors = tube::generate_anchors(a.grid, a.width, a.height, a.clip_length);
    out << anchors.size() << " tube anchors (" << a.grid.anchors_per_position() << " per position, length "
        << a.clip_length << ")\n";
    if (!a.out.empty()) {
        ojson boxes = ojson::array();
        for (const auto& anc : anchors)
            boxes.push_back({anc.base.x_min, anc.base.y_min, anc.base.x_max, anc.base.y_max});
        ojson config{{"width", a.width}, {"height", a.height}, {"clip_length", a.clip_length},
                     {"scales", a.grid.scales}, {"aspects", a.grid.aspects}, {"stride", a.grid.stride}};
        ojson doc{{"config", config}, {"anchors", boxes}};
        write_text_file_atomic(a.out, doc.dump() + "\n");
        RunManifest manifest = new_manifest("anchors", config);
        manifest.outputs.emplace_back("anchors", a.out);
        write_manifest(manifest, a.out);
    }
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Keypoint tracking toolkit: synthesize, track, evaluate, sweep, oracle, bench", "kptrack"};
    app.set_version_flag("--version", std::string(KPTRACK_VERSION));
    app.require_subcommand(1);

    TrackArgs track;
    auto* track_cmd = app.add_subcommand("track", "Link detections into tracks");
    track_cmd->add_option("--pred", track.pred, "Input predictions")->required();
    track_cmd->add_option("--out", track.out, "Output tracked sequence")->required();
    add_link_options(track_cmd, track.link, true);

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "Score tracked predictions against ground truth");
    eval_cmd->add_option("--gt", eval.gt, "Ground-truth sequence")->required();
    eval_cmd->add_option("--pred", eval.pred, "Tracked predictions")->required();
    eval_cmd->add_option("--report", eval.report, "Output JSON report")->required();
    eval_cmd->add_option("--csv", eval.csv, "Also write a one-row CSV");
    eval_cmd->add_option("--alpha", eval.alpha, "PCKh threshold")->capture_default_str();

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Track and evaluate a grid of configurations");
    sweep_cmd->add_option("--gt", sweep.gt, "Ground-truth sequence")->required();
    sweep_cmd->add_option("--pred", sweep.pred, "Untracked predictions")->required();
    sweep_cmd->add_option("--out", sweep.out, "Output CSV")->required();
    sweep_cmd->add_option("--thresholds", sweep.thresholds, "Detection cut-offs")->delimiter(',');
    sweep_cmd->add_option("--algos", sweep.algos, "Matching algorithms")->delimiter(',');
    sweep_cmd->add_option("--costs", sweep.costs, "Similarity criteria")->delimiter(',');
    sweep_cmd->add_option("--alpha", sweep.alpha, "PCKh threshold")->capture_default_str();
    sweep_cmd->add_option("--threads", sweep.threads, "Worker threads (default: KPTRACK_THREADS or all cores)");
    add_link_options(sweep_cmd, sweep.link, false);

    OracleArgs oracle;
    auto* oracle_cmd = app.add_subcommand("oracle", "Apply an upper-bound oracle to tracked predictions");
    oracle_cmd->add_option("--gt", oracle.gt, "Ground-truth sequence")->required();
    oracle_cmd->add_option("--pred", oracle.pred, "Tracked predictions")->required();
    oracle_cmd->add_option("--out", oracle.out, "Output predictions")->required();
    oracle_cmd->add_option("--mode", oracle.mode, "assoc | kpts | both")->required();
    oracle_cmd->add_option("--alpha", oracle.alpha, "PCKh threshold")->capture_default_str();

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a ground-truth / prediction pair");
    synth_cmd->add_option("--gt-out", synth.gt_out, "Output ground truth")->required();
    synth_cmd->add_option("--pred-out", synth.pred_out, "Output predictions")->required();
    synth_cmd->add_option("--config", synth.config, "Scenario JSON; flags override it");
    synth_cmd->add_flag("--noiseless", synth.noiseless, "Start from the zero-noise scenario");
    synth_cmd->add_option("--seed", synth.scenario.seed);
    synth_cmd->add_option("--frames", synth.scenario.frames)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--actors", synth.scenario.actors);
    synth_cmd->add_option("--width", synth.scenario.image_width);
    synth_cmd->add_option("--height", synth.scenario.image_height);
    synth_cmd->add_option("--motion", synth.motion, "linear | sinusoidal");
    synth_cmd->add_option("--occlusion", synth.scenario.occlusion_probability, "Occlusion onset probability");
    synth_cmd->add_option("--label-every", synth.scenario.label_every)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--feature-dim", synth.scenario.feature_dim);
    synth_cmd->add_option("--kp-sigma", synth.scenario.noise.keypoint_sigma, "Keypoint jitter (px)");
    synth_cmd->add_option("--box-sigma", synth.scenario.noise.box_sigma, "Box edge jitter (px)");
    synth_cmd->add_option("--miss", synth.scenario.noise.miss_probability, "Miss probability");
    synth_cmd->add_option("--fp-rate", synth.scenario.noise.fp_rate, "Mean false positives per frame");
    synth_cmd->add_option("--outliers", synth.scenario.noise.keypoint_outlier_probability,
                          "Keypoint outlier probability");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Time tracking against video length");
    bench_cmd->add_option("--frames", bench.frames, "Frame counts")->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--actors", bench.actors)->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed)->capture_default_str();
    bench_cmd->add_option("--repeats", bench.repeats)->check(CLI::PositiveNumber)->capture_default_str();
    bench_cmd->add_option("--out", bench.out, "Write results as JSON");

    AnchorArgs anchors;
    auto* anchors_cmd = app.add_subcommand("anchors", "Dump the tube anchor grid");
    anchors_cmd->add_option("--width", anchors.width)->capture_default_str();
    anchors_cmd->add_option("--height", anchors.height)->capture_default_str();
    anchors_cmd->add_option("--clip-length", anchors.clip_length)->capture_default_str();
    anchors_cmd->add_option("--scales", anchors.grid.scales)->delimiter(',')->capture_default_str();
    anchors_cmd->add_option("--aspects", anchors.grid.aspects)->delimiter(',')->capture_default_str();
    anchors_cmd->add_option("--stride", anchors.grid.stride)->capture_default_str();
    anchors_cmd->add_option("--out", anchors.out, "Write anchors as JSON");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*track_cmd)
            return cmd_track(track, out);
        if (*eval_cmd)
            return cmd_eval(eval, out);
        if (*sweep_cmd)
            return cmd_sweep(sweep, out);
        if (*oracle_cmd)
            return cmd_oracle(oracle, out);
        if (*synth_cmd)
            return cmd_synth(synth, *synth_cmd, out);
        if (*bench_cmd)
            return cmd_bench(bench, out);
        if (*anchors_cmd)
            return cmd_anchors(anchors, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitDataError;
    }
    return kExitUsage;
}

} // namespace kptrack::cli
