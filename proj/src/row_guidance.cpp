#include "rowsim/row_guidance.hpp"

#include <cmath>
#include <stdexcept>

namespace rowsim {

RowCenterEstimate find_min_center(const ColumnHistogram& hist) {
    if (hist.values.empty())
        throw std::invalid_argument("find_min_center: empty histogram");
    double min_value = hist.values[0];
    for (double v : hist.values) min_value = std::min(min_value, v);

    double index_sum = 0.0;
    int count = 0;
    for (int j = 0; j < hist.width(); ++j) {
        if (hist.values[j] == min_value) {
            index_sum += j;
            ++count;
        }
    }
    return {index_sum / count, EstimateStatus::Ok, count};
}

RowCenterEstimate find_zero_run_center(const ColumnHistogram& hist) {
    const int w = hist.width();
    if (w == 0) throw std::invalid_argument("find_zero_run_center: empty histogram");
    const double frame_center = 0.5 * (w - 1);

    int best_width = 0;
    double best_mid = 0.0;
    double best_center_dist = 0.0;
    int run_start = -1;
    for (int j = 0; j <= w; ++j) {
        const bool zero = j < w && hist.values[j] == 0.0;
        if (zero) {
            if (run_start < 0) run_start = j;
            continue;
        }
        if (run_start >= 0) {
            const int width = j - run_start;
            const double mid = 0.5 * (run_start + j - 1);
            const double center_dist = std::abs(mid - frame_center);
            if (width > best_width ||
                (width == best_width && center_dist < best_center_dist)) {
                best_width = width;
                best_mid = mid;
                best_center_dist = center_dist;
            }
            run_start = -1;
        }
    }
    if (best_width == 0) return {0.0, EstimateStatus::NoPassage, 0};
    return {best_mid, EstimateStatus::Ok, best_width};
}

EstimateResult estimate(const FramePair& frame, const PipelineConfig& config,
                        MaskHistory& history) {
    config.validate();
    const MaskGrid mask = binarize(frame, config.confidence_threshold);
    const MaskGrid cum = accumulate(history, mask);
    const MaskGrid gated =
        depth_gate(cum, frame.depth, config.depth_threshold, frame.max_depth);

    EstimateResult result;
    switch (config.variant) {
        case PipelineVariant::SegMin: {
            ColumnHistogram hist = column_histogram(gated);
            hist.variant = PipelineVariant::SegMin;
            result.histogram = smooth(hist, config.smoothing_window);
            result.estimate = find_min_center(result.histogram);
            break;
        }
        case PipelineVariant::SegMinD: {
            const FloatGrid weighted =
                weight_inverse_depth(gated, frame.depth, config.depth_threshold);
            ColumnHistogram hist = column_histogram(weighted);
            hist.variant = PipelineVariant::SegMinD;
            result.histogram = smooth(hist, config.smoothing_window);
            result.estimate = find_min_center(result.histogram);
            break;
        }
        case PipelineVariant::SegZeros: {
            // The baseline depends on exact zeros, which smoothing would
            // destroy; it runs on the raw histogram.
            result.histogram = column_histogram(gated);
            result.histogram.variant = PipelineVariant::SegZeros;
            result.estimate = find_zero_run_center(result.histogram);
            break;
        }
    }
    return result;
}

}  // namespace rowsim
