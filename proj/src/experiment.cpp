#include "rowsim/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "rowsim/image_io.hpp"
#include "rowsim/rng.hpp"
#include "rowsim/row_guidance.hpp"

namespace fs = std::filesystem;

namespace rowsim {

namespace {

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

void save_mask_pgm(const MaskGrid& mask, const std::string& path) {
    PgmImage img;
    img.width = mask.width();
    img.height = mask.height();
    img.maxval = 255;
    img.pixels.resize(mask.size());
    for (int i = 0; i < mask.height(); ++i)
        for (int j = 0; j < mask.width(); ++j)
            img.pixels[std::size_t(i) * mask.width() + j] = mask.at(i, j) ? 255 : 0;
    save_pgm(img, path);
}

void save_float_pgm(const FloatGrid& grid, const std::string& path) {
    PgmImage img;
    img.width = grid.width();
    img.height = grid.height();
    img.maxval = 255;
    img.pixels.resize(grid.size());
    for (int i = 0; i < grid.height(); ++i)
        for (int j = 0; j < grid.width(); ++j)
            img.pixels[std::size_t(i) * grid.width() + j] =
                std::uint16_t(std::lround(clamp01(grid.at(i, j)) * 255.0));
    save_pgm(img, path);
}

std::string histogram_csv(const ColumnHistogram& raw, const ColumnHistogram& smoothed,
                          const RowCenterEstimate& est) {
    char buf[160];
    std::string out;
    std::snprintf(buf, sizeof(buf), "# variant=%s x_h=%.12g tie_count=%d status=%s\n",
                  variant_name(raw.variant).c_str(), est.center_column, est.tie_count,
                  est.status == EstimateStatus::Ok ? "ok" : "no_passage");
    out += buf;
    out += "column,raw,smoothed\n";
    for (int j = 0; j < raw.width(); ++j) {
        std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g\n", j, raw.values[j],
                      smoothed.values[j]);
        out += buf;
    }
    return out;
}

double lane_axis_heading(const Centerline& line, double s) {
    const Vec2 t = line.tangent_at(s);
    return std::atan2(t.y, t.x);
}

}  // namespace

RunResult run_single(const ExperimentConfig& config, std::uint64_t seed) {
    config.validate();
    const CropRowWorld world = build_world(config.preset, seed, config.world);

    RunResult result;
    result.seed = seed;
    result.log = run_episode(world, config.episode, seed);

    const Centerline centerline =
        ground_truth_centerline(world, config.episode.params.lane);
    const double axis =
        lane_axis_heading(centerline, config.episode.params.start_advance);
    result.metrics =
        summarize(result.log, centerline, axis, config.gamma_mode);
    return result;
}

void write_run_artifacts(const std::string& dir, const ExperimentConfig& config,
                         const RunResult& result) {
    fs::create_directories(dir);
    ExperimentConfig pinned = config;
    pinned.seeds = {result.seed};
    write_text(dir + "/manifest.txt", experiment_to_manifest(pinned));
    write_text(dir + "/episode.csv", episode_to_csv(result.log));
    write_text(dir + "/metrics.csv", metrics_to_csv(result.metrics));
    write_text(dir + "/metrics.txt", metrics_to_text(result.metrics));
}

std::vector<VariantComparison> run_compare(const ExperimentConfig& config,
                                           const std::vector<PipelineVariant>& variants,
                                           const std::string& out_dir) {
    if (variants.size() < 2)
        throw std::invalid_argument("compare needs at least 2 variants");

    std::vector<VariantComparison> rows;
    for (PipelineVariant variant : variants) {
        ExperimentConfig cfg = config;
        cfg.episode.pipeline.variant = variant;

        VariantComparison row;
        row.variant = variant;
        std::vector<MetricsReport> reports;
        for (std::uint64_t seed : cfg.seeds) {
            RunResult r = run_single(cfg, seed);
            if (!out_dir.empty())
                write_run_artifacts(out_dir + "/" + variant_name(variant) + "/seed" +
                                        std::to_string(seed),
                                    cfg, r);
            reports.push_back(r.metrics);
            row.runs.push_back(std::move(r));
        }
        row.aggregate = aggregate(reports);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string comparison_table(const std::vector<VariantComparison>& rows) {
    char buf[256];
    std::string out =
        "variant    clearance[s]      MAE[m]          MSE[m2]         "
        "gamma[rad]      v_avg[m/s]      w_std[rad/s]    finished\n";
    for (const VariantComparison& row : rows) {
        const MetricsReport& m = row.aggregate.mean;
        const MetricsReport& s = row.aggregate.stddev;
        std::snprintf(buf, sizeof(buf),
                      "%-9s %7.2f +-%5.2f %7.3f +-%5.3f %7.3f +-%5.3f %7.3f "
                      "+-%5.3f %7.3f +-%5.3f %7.3f +-%5.3f %d/%d\n",
                      variant_name(row.variant).c_str(), m.clearance_s,
                      s.clearance_s, m.mae_m, s.mae_m, m.mse_m2, s.mse_m2,
                      m.cum_heading_avg_rad, s.cum_heading_avg_rad, m.v_avg_mps,
                      s.v_avg_mps, m.omega_stddev_radps, s.omega_stddev_radps,
                      row.aggregate.finished, row.aggregate.runs);
        out += buf;
    }
    return out;
}

std::string comparison_csv(const std::vector<VariantComparison>& rows) {
    char buf[512];
    std::string out =
        "variant,clearance_mean,clearance_std,mae_mean,mae_std,mse_mean,mse_std,"
        "gamma_mean,gamma_std,v_avg_mean,v_avg_std,omega_std_mean,omega_std_std,"
        "finished,runs\n";
    for (const VariantComparison& row : rows) {
        const MetricsReport& m = row.aggregate.mean;
        const MetricsReport& s = row.aggregate.stddev;
        std::snprintf(buf, sizeof(buf),
                      "%s,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,"
                      "%.12g,%.12g,%.12g,%d,%d\n",
                      variant_name(row.variant).c_str(), m.clearance_s,
                      s.clearance_s, m.mae_m, s.mae_m, m.mse_m2, s.mse_m2,
                      m.cum_heading_avg_rad, s.cum_heading_avg_rad, m.v_avg_mps,
                      s.v_avg_mps, m.omega_stddev_radps, s.omega_stddev_radps,
                      row.aggregate.finished, row.aggregate.runs);
        out += buf;
    }
    return out;
}

AblationGrid run_ablation(const ExperimentConfig& config,
                          const std::vector<double>& depth_thresholds,
                          const std::vector<double>& confidences,
                          const std::string& out_dir) {
    if (depth_thresholds.empty() || confidences.empty())
        throw std::invalid_argument("ablation grids must be non-empty");

    AblationGrid grid;
    double best_mae = std::numeric_limits<double>::infinity();
    for (double conf : confidences) {
        for (double d_th : depth_thresholds) {
            ExperimentConfig cfg = config;
            cfg.corruption_enabled = true;
            cfg.episode.corruption = cfg.corruption;
            cfg.episode.pipeline.confidence_threshold = conf;
            cfg.episode.pipeline.depth_threshold = d_th;

            std::vector<MetricsReport> reports;
            for (std::uint64_t seed : cfg.seeds) {
                RunResult r = run_single(cfg, seed);
                if (!out_dir.empty()) {
                    char cell[96];
                    std::snprintf(cell, sizeof(cell), "conf%.2g_dth%.2g/seed%llu",
                                  conf, d_th,
                                  static_cast<unsigned long long>(seed));
                    write_run_artifacts(out_dir + "/" + cell, cfg, r);
                }
                reports.push_back(r.metrics);
            }
            AblationCell c{conf, d_th, aggregate(reports)};
            if (c.aggregate.mean.mae_m < best_mae) {
                best_mae = c.aggregate.mean.mae_m;
                grid.best_mae_index = grid.cells.size();
            }
            grid.cells.push_back(std::move(c));
        }
    }
    return grid;
}

std::string ablation_table(const AblationGrid& grid) {
    char buf[256];
    std::string out;
    double last_conf = -1.0;
    for (std::size_t k = 0; k < grid.cells.size(); ++k) {
        const AblationCell& c = grid.cells[k];
        if (c.confidence != last_conf) {
            std::snprintf(buf, sizeof(buf), "-- confidence %.2f --\n", c.confidence);
            out += buf;
            out += "d_th[m]   MAE[m]    RMSE[m]   gamma[rad]  w_std[rad/s]\n";
            last_conf = c.confidence;
        }
        const MetricsReport& m = c.aggregate.mean;
        std::snprintf(buf, sizeof(buf), "%6.1f  %8.4f  %8.4f  %9.4f  %11.4f%s\n",
                      c.depth_threshold, m.mae_m, m.rmse_m, m.cum_heading_avg_rad,
                      m.omega_stddev_radps,
                      k == grid.best_mae_index ? "   <- best MAE" : "");
        out += buf;
    }
    return out;
}

std::string ablation_csv(const AblationGrid& grid) {
    char buf[256];
    std::string out =
        "confidence,depth_threshold,mae,rmse,gamma,omega_std,finished,runs,best\n";
    for (std::size_t k = 0; k < grid.cells.size(); ++k) {
        const AblationCell& c = grid.cells[k];
        const MetricsReport& m = c.aggregate.mean;
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%d,%d,%d\n",
                      c.confidence, c.depth_threshold, m.mae_m, m.rmse_m,
                      m.cum_heading_avg_rad, m.omega_stddev_radps,
                      c.aggregate.finished, c.aggregate.runs,
                      k == grid.best_mae_index ? 1 : 0);
        out += buf;
    }
    return out;
}

StageDumper::StageDumper(const PipelineConfig& pipeline, std::string out_dir)
    : pipeline_(pipeline), out_dir_(std::move(out_dir)),
      history_(pipeline.history_n) {
    fs::create_directories(out_dir_);
}

void StageDumper::dump(long frame_index, const FramePair& frame) {
    char prefix[64];
    std::snprintf(prefix, sizeof(prefix), "%s/frame%06ld_", out_dir_.c_str(),
                  frame_index);
    const std::string p(prefix);

    const MaskGrid mask = binarize(frame, pipeline_.confidence_threshold);
    const MaskGrid cum = accumulate(history_, mask);
    const MaskGrid gated =
        depth_gate(cum, frame.depth, pipeline_.depth_threshold, frame.max_depth);

    save_frame_pair(frame, p + "mask.pgm", p + "depth.pgm");
    save_mask_pgm(cum, p + "cum_mask.pgm");
    save_mask_pgm(gated, p + "gated.pgm");

    ColumnHistogram hist;
    if (pipeline_.variant == PipelineVariant::SegMinD) {
        const FloatGrid weighted =
            weight_inverse_depth(gated, frame.depth, pipeline_.depth_threshold);
        save_float_pgm(weighted, p + "weighted.pgm");
        hist = column_histogram(weighted);
    } else {
        hist = column_histogram(gated);
    }
    hist.variant = pipeline_.variant;

    if (pipeline_.variant == PipelineVariant::SegZeros) {
        const RowCenterEstimate est = find_zero_run_center(hist);
        write_text(p + "hist.csv", histogram_csv(hist, hist, est));
    } else {
        const ColumnHistogram smoothed = smooth(hist, pipeline_.smoothing_window);
        const RowCenterEstimate est = find_min_center(smoothed);
        write_text(p + "hist.csv", histogram_csv(hist, smoothed, est));
    }
}

void render_debug_dump(const ExperimentConfig& config, const RobotState& pose,
                       const std::string& out_dir) {
    config.validate();
    fs::create_directories(out_dir);
    const std::uint64_t seed = config.seeds.front();
    const CropRowWorld world = build_world(config.preset, seed, config.world);

    FramePair frame = render_frame(world, pose, config.episode.camera);
    if (config.corruption_enabled) {
        CorruptionModel m = config.corruption;
        m.rng_seed = derive_seed(seed, "corruption", 0);
        frame = corrupt_frame(frame, m);
    }

    save_frame_pair(frame, out_dir + "/mask.pgm", out_dir + "/depth.pgm");

    const MaskGrid mask = binarize(frame, config.episode.pipeline.confidence_threshold);
    MaskHistory history(config.episode.pipeline.history_n);
    const MaskGrid cum = accumulate(history, mask);
    const MaskGrid gated = depth_gate(cum, frame.depth,
                                      config.episode.pipeline.depth_threshold,
                                      frame.max_depth);
    save_mask_pgm(cum, out_dir + "/cum_mask.pgm");
    save_mask_pgm(gated, out_dir + "/gated.pgm");
    const FloatGrid weighted = weight_inverse_depth(
        gated, frame.depth, config.episode.pipeline.depth_threshold);
    save_float_pgm(weighted, out_dir + "/weighted.pgm");

    // All three variants on the same frame, for side-by-side histograms.
    ColumnHistogram segmin_raw = column_histogram(gated);
    segmin_raw.variant = PipelineVariant::SegMin;
    const ColumnHistogram segmin =
        smooth(segmin_raw, config.episode.pipeline.smoothing_window);
    write_text(out_dir + "/hist_segmin.csv",
               histogram_csv(segmin_raw, segmin, find_min_center(segmin)));

    ColumnHistogram segmind_raw = column_histogram(weighted);
    segmind_raw.variant = PipelineVariant::SegMinD;
    const ColumnHistogram segmind =
        smooth(segmind_raw, config.episode.pipeline.smoothing_window);
    write_text(out_dir + "/hist_segmind.csv",
               histogram_csv(segmind_raw, segmind, find_min_center(segmind)));

    ColumnHistogram segzeros = segmin_raw;
    segzeros.variant = PipelineVariant::SegZeros;
    write_text(out_dir + "/hist_segzeros.csv",
               histogram_csv(segzeros, segzeros, find_zero_run_center(segzeros)));
}

}  // namespace rowsim
