// rowsim command-line front end: run, compare and ablate experiments,
// dump per-stage debug frames, export worlds, and score external masks.
//
// Exit codes form a stable contract:
//   0  episode finished (or subcommand succeeded)
//   2  episode ended in collision
//   3  episode stalled
//   4  episode timed out
//   64 usage or configuration error
//   70 internal error

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "rowsim/config.hpp"
#include "rowsim/experiment.hpp"
#include "rowsim/image_io.hpp"
#include "rowsim/metrics.hpp"
#include "rowsim/row_guidance.hpp"

namespace {

using namespace rowsim;

constexpr int kExitCollision = 2;
constexpr int kExitStalled = 3;
constexpr int kExitTimeout = 4;
constexpr int kExitUsage = 64;
constexpr int kExitInternal = 70;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::string variant;
    std::string gamma_mode;
    long seed = -1;
    bool literal_eq10 = false;
    bool debug_frames = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    auto* c = cmd->add_option("--config", opts.config_path,
                              "experiment config file (key = value lines)");
    if (config_required) c->required();
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "override experiment.seeds with one seed");
    cmd->add_option("--variant", opts.variant,
                    "override pipeline.variant (segmin|segmind|segzeros)");
    cmd->add_option("--gamma-mode", opts.gamma_mode,
                    "heading statistic: signed-mean | abs-accumulate");
    cmd->add_flag("--literal-eq10", opts.literal_eq10,
                  "use the one-signed printed steering law");
    cmd->add_flag("--debug-frames", opts.debug_frames,
                  "dump pipeline stages for consumed frames (1 Hz)");
}

ExperimentConfig load_with_overrides(const CommonOpts& opts) {
    ExperimentConfig cfg = load_experiment_config(opts.config_path);
    if (opts.seed >= 0) cfg.seeds = {static_cast<std::uint64_t>(opts.seed)};
    if (!opts.variant.empty())
        cfg.episode.pipeline.variant = parse_variant(opts.variant);
    if (!opts.gamma_mode.empty()) cfg.gamma_mode = parse_gamma_mode(opts.gamma_mode);
    if (opts.literal_eq10) cfg.episode.controller.literal_eq10 = true;
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
    return cfg;
}

int termination_exit_code(Termination t) {
    switch (t) {
        case Termination::Finished: return 0;
        case Termination::Collision: return kExitCollision;
        case Termination::Stalled: return kExitStalled;
        case Termination::Timeout: return kExitTimeout;
    }
    return kExitInternal;
}

int cmd_run(const CommonOpts& opts) {
    ExperimentConfig cfg = load_with_overrides(opts);
    const std::string out = cfg.out_dir.empty() ? "out/run" : cfg.out_dir;

    std::unique_ptr<StageDumper> dumper;
    if (opts.debug_frames) {
        dumper = std::make_unique<StageDumper>(cfg.episode.pipeline, out + "/debug");
        const int every = cfg.episode.rates.camera_hz;  // about one dump per second
        StageDumper* raw = dumper.get();
        cfg.episode.frame_hook = [raw, every](long index, const FramePair& frame) {
            if (index % every == 0) raw->dump(index, frame);
        };
    }

    const RunResult result = run_single(cfg, cfg.seeds.front());
    write_run_artifacts(out, cfg, result);

    std::printf("%s", metrics_to_text(result.metrics).c_str());
    std::printf("artifacts: %s\n", out.c_str());
    return termination_exit_code(result.log.termination);
}

int cmd_compare(const CommonOpts& opts, const std::vector<std::string>& variant_names) {
    ExperimentConfig cfg = load_with_overrides(opts);
    std::vector<PipelineVariant> variants;
    for (const std::string& name : variant_names)
        variants.push_back(parse_variant(name));

    const std::string out = cfg.out_dir.empty() ? "out/compare" : cfg.out_dir;
    const auto rows = run_compare(cfg, variants, out);
    const std::string table = comparison_table(rows);
    std::printf("%s", table.c_str());

    std::filesystem::create_directories(out);
    std::ofstream(out + "/comparison.csv") << comparison_csv(rows);
    std::ofstream(out + "/comparison.txt") << table;
    return 0;
}

int cmd_ablate(const CommonOpts& opts, std::vector<double> depths,
               std::vector<double> confidences) {
    ExperimentConfig cfg = load_with_overrides(opts);
    const std::string out = cfg.out_dir.empty() ? "out/ablate" : cfg.out_dir;
    const AblationGrid grid = run_ablation(cfg, depths, confidences, out);
    const std::string table = ablation_table(grid);
    std::printf("%s", table.c_str());

    std::filesystem::create_directories(out);
    std::ofstream(out + "/ablation.csv") << ablation_csv(grid);
    std::ofstream(out + "/ablation.txt") << table;
    return 0;
}

int cmd_render_debug(const CommonOpts& opts, const std::vector<double>& pose) {
    ExperimentConfig cfg = load_with_overrides(opts);
    const std::string out = cfg.out_dir.empty() ? "out/render_debug" : cfg.out_dir;
    RobotState state;
    state.x = pose[0];
    state.y = pose[1];
    state.theta = pose.size() > 2 ? pose[2] : 0.0;
    render_debug_dump(cfg, state, out);
    std::printf("debug frames: %s\n", out.c_str());
    return 0;
}

int cmd_dump_world(const CommonOpts& opts, const std::string& csv_path) {
    ExperimentConfig cfg = load_with_overrides(opts);
    const CropRowWorld world = build_world(cfg.preset, cfg.seeds.front(), cfg.world);
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + csv_path);
    out << world_to_csv(world);
    std::printf("world csv: %s\n", csv_path.c_str());
    return 0;
}

int cmd_mask_iou(const std::string& pred_mask, const std::string& pred_depth,
                 const std::string& truth_mask, const std::string& truth_depth,
                 double threshold) {
    const FramePair pred = load_frame_pair(pred_mask, pred_depth);
    const FramePair truth = load_frame_pair(truth_mask, truth_depth);
    const double score = iou(binarize(pred, threshold), binarize(truth, threshold));
    std::printf("iou %.6f\n", score);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rowsim: segmentation-histogram crop-row guidance laboratory"};
    app.require_subcommand(1);

    CommonOpts run_opts, compare_opts, ablate_opts, debug_opts, world_opts;
    std::vector<std::string> compare_variants;
    std::vector<double> ablate_depths, ablate_confs;
    std::vector<double> debug_pose;
    std::string world_csv = "world.csv";
    std::string iou_pred_mask, iou_pred_depth, iou_truth_mask, iou_truth_depth;
    double iou_threshold = 0.5;

    CLI::App* run = app.add_subcommand("run", "run one closed-loop episode");
    add_common(run, run_opts);

    CLI::App* compare =
        app.add_subcommand("compare", "side-by-side variant comparison over seeds");
    add_common(compare, compare_opts);
    compare->add_option("--variants", compare_variants, "two or more variants")
        ->required()
        ->delimiter(',');

    CLI::App* ablate = app.add_subcommand(
        "ablate", "depth-threshold x confidence sweep with corruption enabled");
    add_common(ablate, ablate_opts);
    ablate->add_option("--depth-thresholds", ablate_depths, "meters")
        ->required()
        ->delimiter(',');
    ablate->add_option("--confidences", ablate_confs, "thresholds in [0,1]")
        ->required()
        ->delimiter(',');

    CLI::App* render =
        app.add_subcommand("render-debug", "dump pipeline stages for one pose");
    add_common(render, debug_opts);
    render->add_option("--pose", debug_pose, "x,y[,theta]")
        ->required()
        ->delimiter(',')
        ->expected(2, 3);

    CLI::App* dump = app.add_subcommand("dump-world", "plant-pose CSV export");
    add_common(dump, world_opts);
    dump->add_option("--csv", world_csv, "output CSV path");

    CLI::App* miou =
        app.add_subcommand("mask-iou", "IoU between two stored frame pairs");
    miou->add_option("--pred-mask", iou_pred_mask)->required();
    miou->add_option("--pred-depth", iou_pred_depth)->required();
    miou->add_option("--truth-mask", iou_truth_mask)->required();
    miou->add_option("--truth-depth", iou_truth_depth)->required();
    miou->add_option("--threshold", iou_threshold, "binarization threshold");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run_opts);
        if (compare->parsed()) return cmd_compare(compare_opts, compare_variants);
        if (ablate->parsed())
            return cmd_ablate(ablate_opts, ablate_depths, ablate_confs);
        if (render->parsed()) return cmd_render_debug(debug_opts, debug_pose);
        if (dump->parsed()) return cmd_dump_world(world_opts, world_csv);
        if (miou->parsed())
            return cmd_mask_iou(iou_pred_mask, iou_pred_depth, iou_truth_mask,
                                iou_truth_depth, iou_threshold);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInternal;
    }
    return kExitUsage;
}
