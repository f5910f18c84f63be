#pragma once

#include <string>
#include <vector>

#include "rowsim/grid.hpp"
#include "rowsim/sim_loop.hpp"
#include "rowsim/world.hpp"

namespace rowsim {

/// Heading statistic: signed mean deviation from the row axis (default), or
/// accumulated absolute per-step heading change.
enum class GammaMode { SignedMean, AbsAccumulate };

GammaMode parse_gamma_mode(const std::string& name);
std::string gamma_mode_name(GammaMode mode);

struct MetricsReport {
    double clearance_s{0.0};
    double mae_m{0.0};
    double mse_m2{0.0};
    double rmse_m{0.0};
    double cum_heading_avg_rad{0.0};
    double v_avg_mps{0.0};
    double omega_stddev_radps{0.0};
    Termination termination{Termination::Timeout};
    int samples{0};
};

/// Signed shortest distance from each logged position to the centerline,
/// positive left of the travel direction.
std::vector<double> cross_track_errors(const EpisodeLog& log,
                                       const Centerline& centerline);

MetricsReport summarize(const EpisodeLog& log, const Centerline& centerline,
                        double row_axis_heading,
                        GammaMode mode = GammaMode::SignedMean);

/// |A n B| / |A u B|; 1 when both masks are empty.
double iou(const MaskGrid& predicted, const MaskGrid& truth);

struct LaneOffsets {
    double left{0.0};
    double right{0.0};
};

/// Splits a robot-frame point set into two lateral clusters (1-D two-means
/// on y), fits a total-least-squares line to each, and returns each line's
/// shortest distance to the origin.
LaneOffsets lidar_style_offset(const std::vector<Vec2>& points);

/// Mean and population standard deviation per metric across runs.
struct AggregateReport {
    MetricsReport mean;
    MetricsReport stddev;
    int runs{0};
    int finished{0};
};

AggregateReport aggregate(const std::vector<MetricsReport>& reports);

std::string metrics_to_csv(const MetricsReport& report);
std::string metrics_to_text(const MetricsReport& report);

}  // namespace rowsim
