#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rowsim/config.hpp"
#include "rowsim/metrics.hpp"
#include "rowsim/sim_loop.hpp"

namespace rowsim {

struct RunResult {
    std::uint64_t seed{0};
    EpisodeLog log;
    MetricsReport metrics;
};

/// Builds the world from the run seed and executes one closed-loop episode.
RunResult run_single(const ExperimentConfig& config, std::uint64_t seed);

/// Writes episode.csv, metrics.csv, metrics.txt and manifest.txt into `dir`
/// (created if needed). The manifest pins the seed so the directory is
/// self-reproducing.
void write_run_artifacts(const std::string& dir, const ExperimentConfig& config,
                         const RunResult& result);

struct VariantComparison {
    PipelineVariant variant;
    AggregateReport aggregate;
    std::vector<RunResult> runs;
};

/// Runs every seed for each variant; artifacts land in out_dir/<variant>/
/// seed<N>/ when out_dir is non-empty.
std::vector<VariantComparison> run_compare(const ExperimentConfig& config,
                                           const std::vector<PipelineVariant>& variants,
                                           const std::string& out_dir);

std::string comparison_table(const std::vector<VariantComparison>& rows);
std::string comparison_csv(const std::vector<VariantComparison>& rows);

struct AblationCell {
    double confidence;
    double depth_threshold;
    AggregateReport aggregate;
};

struct AblationGrid {
    std::vector<AblationCell> cells;  // confidence-major order
    std::size_t best_mae_index{0};
};

/// Cross product of confidences and depth thresholds with the corruption
/// model enabled; each cell aggregates all configured seeds.
AblationGrid run_ablation(const ExperimentConfig& config,
                          const std::vector<double>& depth_thresholds,
                          const std::vector<double>& confidences,
                          const std::string& out_dir);

std::string ablation_table(const AblationGrid& grid);
std::string ablation_csv(const AblationGrid& grid);

/// Dumps every pipeline stage for one frame: mask/cum/gated PGMs, the
/// weighted grid, depth, and per-variant histogram CSVs with the chosen
/// center column.
void render_debug_dump(const ExperimentConfig& config, const RobotState& pose,
                       const std::string& out_dir);

/// Per-stage dump used by --debug-frames; keeps its own history so the
/// episode state is untouched.
class StageDumper {
public:
    StageDumper(const PipelineConfig& pipeline, std::string out_dir);
    void dump(long frame_index, const FramePair& frame);

private:
    PipelineConfig pipeline_;
    std::string out_dir_;
    MaskHistory history_;
};

}  // namespace rowsim
