#pragma once

#include <deque>
#include <limits>
#include <string>
#include <vector>

#include "rowsim/camera.hpp"
#include "rowsim/grid.hpp"

namespace rowsim {

enum class PipelineVariant { SegMin, SegMinD, SegZeros };

PipelineVariant parse_variant(const std::string& name);
std::string variant_name(PipelineVariant variant);

struct PipelineConfig {
    int history_n{3};
    double confidence_threshold{0.5};
    double depth_threshold{5.0};
    int smoothing_window{5};
    PipelineVariant variant{PipelineVariant::SegMin};

    void validate() const;
};

/// Per-column vegetation scores the minimum search runs on.
struct ColumnHistogram {
    std::vector<double> values;
    PipelineVariant variant{PipelineVariant::SegMin};

    int width() const { return static_cast<int>(values.size()); }
};

/// Ring buffer of the most recent binarized masks (the OR-accumulation
/// window). Single-owner mutable state; one instance per pipeline.
class MaskHistory {
public:
    explicit MaskHistory(int capacity);

    void push(const MaskGrid& mask);
    void clear() { frames_.clear(); }
    int capacity() const { return capacity_; }
    const std::deque<MaskGrid>& frames() const { return frames_; }

private:
    int capacity_;
    std::deque<MaskGrid> frames_;
};

/// Pixel = 1 iff confidence >= threshold.
MaskGrid binarize(const FramePair& frame, double confidence_threshold);

/// Pushes the mask and returns the element-wise OR of the buffered window.
MaskGrid accumulate(MaskHistory& history, const MaskGrid& mask);

/// Keeps a pixel iff it is masked and its depth is within d_th. Depths at
/// or beyond `sentinel` never pass, whatever d_th is.
MaskGrid depth_gate(const MaskGrid& cum_mask, const FloatGrid& depth, double d_th,
                    double sentinel = std::numeric_limits<double>::infinity());

/// Eq-style inverse-depth weighting: masked pixels get 1 - depth/d_th,
/// clamped to [0, 1].
FloatGrid weight_inverse_depth(const MaskGrid& gated_mask, const FloatGrid& depth,
                               double d_th);

ColumnHistogram column_histogram(const MaskGrid& grid);
ColumnHistogram column_histogram(const FloatGrid& grid);

/// Centered moving average with truncated windows at the borders (the
/// divisor shrinks; edges are not zero-padded). n must be odd.
ColumnHistogram smooth(const ColumnHistogram& hist, int n);

}  // namespace rowsim
