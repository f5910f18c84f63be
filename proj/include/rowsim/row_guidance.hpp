#pragma once

#include "rowsim/mask_pipeline.hpp"

namespace rowsim {

enum class EstimateStatus { Ok, NoPassage };

/// Row-center column extracted from a histogram. tie_count reports how many
/// columns attained the global minimum (the ambiguity of the estimate);
/// no_passage is only produced by the zero-run baseline.
struct RowCenterEstimate {
    double center_column{0.0};
    EstimateStatus status{EstimateStatus::Ok};
    int tie_count{0};
};

/// Mean of all column indices attaining the global minimum.
RowCenterEstimate find_min_center(const ColumnHistogram& hist);

/// Midpoint of the widest run of exactly-zero columns. Width ties go to the
/// run whose midpoint is nearest the frame center, then to the lowest index.
/// no_passage when no zero column exists.
RowCenterEstimate find_zero_run_center(const ColumnHistogram& hist);

struct EstimateResult {
    RowCenterEstimate estimate;
    ColumnHistogram histogram;  // diagnostic: the histogram the search ran on
};

/// Runs the configured variant end to end on one frame:
///   SegMin    binarize > accumulate > depth gate > column sums > smooth > min
///   SegMinD   same, with inverse-depth weighting before the column sums
///   SegZeros  binarize > accumulate > depth gate > column sums > zero run
EstimateResult estimate(const FramePair& frame, const PipelineConfig& config,
                        MaskHistory& history);

}  // namespace rowsim
