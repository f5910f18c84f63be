#include "rowsim/mask_pipeline.hpp"

#include <stdexcept>

namespace rowsim {

PipelineVariant parse_variant(const std::string& name) {
    if (name == "segmin") return PipelineVariant::SegMin;
    if (name == "segmind") return PipelineVariant::SegMinD;
    if (name == "segzeros") return PipelineVariant::SegZeros;
    throw std::invalid_argument("unknown pipeline variant: " + name);
}

std::string variant_name(PipelineVariant variant) {
    switch (variant) {
        case PipelineVariant::SegMin: return "segmin";
        case PipelineVariant::SegMinD: return "segmind";
        case PipelineVariant::SegZeros: return "segzeros";
    }
    throw std::invalid_argument("invalid variant enum");
}

void PipelineConfig::validate() const {
    if (history_n < 1) throw std::invalid_argument("pipeline.history must be >= 1");
    if (confidence_threshold < 0.0 || confidence_threshold > 1.0)
        throw std::invalid_argument("pipeline.confidence_threshold must be in [0,1]");
    if (depth_threshold <= 0.0)
        throw std::invalid_argument("pipeline.depth_threshold must be positive");
    if (smoothing_window < 1 || smoothing_window % 2 == 0)
        throw std::invalid_argument("pipeline.smoothing_window must be odd and >= 1");
}

MaskHistory::MaskHistory(int capacity) : capacity_(capacity) {
    if (capacity < 1) throw std::invalid_argument("history capacity must be >= 1");
}

void MaskHistory::push(const MaskGrid& mask) {
    if (!frames_.empty()) require_same_shape(frames_.front(), mask, "MaskHistory");
    frames_.push_back(mask);
    while (static_cast<int>(frames_.size()) > capacity_) frames_.pop_front();
}

MaskGrid binarize(const FramePair& frame, double confidence_threshold) {
    const int h = frame.soft_mask.height(), w = frame.soft_mask.width();
    MaskGrid out(h, w);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j)
            out.at(i, j) = frame.soft_mask.at(i, j) >= confidence_threshold ? 1 : 0;
    return out;
}

MaskGrid accumulate(MaskHistory& history, const MaskGrid& mask) {
    history.push(mask);
    MaskGrid out = history.frames().front();
    for (const MaskGrid& m : history.frames()) {
        for (int i = 0; i < out.height(); ++i)
            for (int j = 0; j < out.width(); ++j)
                out.at(i, j) = out.at(i, j) | m.at(i, j);
    }
    return out;
}

MaskGrid depth_gate(const MaskGrid& cum_mask, const FloatGrid& depth, double d_th,
                    double sentinel) {
    require_same_shape(cum_mask, depth, "depth_gate");
    if (d_th <= 0.0) throw std::invalid_argument("depth_gate: d_th must be positive");
    const int h = cum_mask.height(), w = cum_mask.width();
    MaskGrid out(h, w);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            const double d = depth.at(i, j);
            out.at(i, j) = (cum_mask.at(i, j) != 0 && d <= d_th && d < sentinel) ? 1 : 0;
        }
    return out;
}

FloatGrid weight_inverse_depth(const MaskGrid& gated_mask, const FloatGrid& depth,
                               double d_th) {
    require_same_shape(gated_mask, depth, "weight_inverse_depth");
    const int h = gated_mask.height(), w = gated_mask.width();
    FloatGrid out(h, w, 0.0f);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j)
            if (gated_mask.at(i, j))
                out.at(i, j) = float(clamp01(1.0 - depth.at(i, j) / d_th));
    return out;
}

ColumnHistogram column_histogram(const MaskGrid& grid) {
    if (grid.empty()) throw std::invalid_argument("column_histogram: empty grid");
    ColumnHistogram hist;
    hist.values.assign(grid.width(), 0.0);
    for (int i = 0; i < grid.height(); ++i)
        for (int j = 0; j < grid.width(); ++j)
            hist.values[j] += grid.at(i, j);
    return hist;
}

ColumnHistogram column_histogram(const FloatGrid& grid) {
    if (grid.empty()) throw std::invalid_argument("column_histogram: empty grid");
    ColumnHistogram hist;
    hist.values.assign(grid.width(), 0.0);
    for (int i = 0; i < grid.height(); ++i)
        for (int j = 0; j < grid.width(); ++j)
            hist.values[j] += grid.at(i, j);
    return hist;
}

ColumnHistogram smooth(const ColumnHistogram& hist, int n) {
    const int w = hist.width();
    if (n < 1 || n % 2 == 0 || n > w)
        throw std::invalid_argument("smooth: window must be odd and within [1, w]");
    ColumnHistogram out;
    out.variant = hist.variant;
    out.values.resize(w);
    const int half = n / 2;
    for (int j = 0; j < w; ++j) {
        const int lo = std::max(0, j - half);
        const int hi = std::min(w - 1, j + half);
        double sum = 0.0;
        for (int k = lo; k <= hi; ++k) sum += hist.values[k];
        out.values[j] = sum / (hi - lo + 1);
    }
    return out;
}

}  // namespace rowsim
