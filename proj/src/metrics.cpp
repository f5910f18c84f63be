#include "rowsim/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rowsim {

GammaMode parse_gamma_mode(const std::string& name) {
    if (name == "signed-mean") return GammaMode::SignedMean;
    if (name == "abs-accumulate") return GammaMode::AbsAccumulate;
    throw std::invalid_argument("unknown gamma mode: " + name);
}

std::string gamma_mode_name(GammaMode mode) {
    return mode == GammaMode::SignedMean ? "signed-mean" : "abs-accumulate";
}

std::vector<double> cross_track_errors(const EpisodeLog& log,
                                       const Centerline& centerline) {
    if (log.records.empty())
        throw std::invalid_argument("cross_track_errors: empty log");
    std::vector<double> errors;
    errors.reserve(log.records.size());
    for (const LogRecord& r : log.records)
        errors.push_back(centerline.project({r.state.x, r.state.y}).lateral);
    return errors;
}

MetricsReport summarize(const EpisodeLog& log, const Centerline& centerline,
                        double row_axis_heading, GammaMode mode) {
    const std::vector<double> errors = cross_track_errors(log, centerline);

    MetricsReport rep;
    rep.termination = log.termination;
    rep.samples = static_cast<int>(log.records.size());
    rep.clearance_s = log.termination_time - log.records.front().t;

    double abs_sum = 0.0, sq_sum = 0.0;
    for (double e : errors) {
        abs_sum += std::abs(e);
        sq_sum += e * e;
    }
    rep.mae_m = abs_sum / errors.size();
    rep.mse_m2 = sq_sum / errors.size();
    rep.rmse_m = std::sqrt(rep.mse_m2);

    double gamma = 0.0;
    if (mode == GammaMode::SignedMean) {
        for (const LogRecord& r : log.records)
            gamma += wrap_angle(r.state.theta - row_axis_heading);
        gamma /= log.records.size();
    } else {
        for (std::size_t k = 1; k < log.records.size(); ++k)
            gamma += std::abs(wrap_angle(log.records[k].state.theta -
                                         log.records[k - 1].state.theta));
    }
    rep.cum_heading_avg_rad = gamma;

    double v_sum = 0.0, w_sum = 0.0;
    for (const LogRecord& r : log.records) {
        v_sum += r.smoothed.v;
        w_sum += r.smoothed.omega;
    }
    rep.v_avg_mps = v_sum / log.records.size();
    const double w_mean = w_sum / log.records.size();
    double w_var = 0.0;
    for (const LogRecord& r : log.records) {
        const double d = r.smoothed.omega - w_mean;
        w_var += d * d;
    }
    rep.omega_stddev_radps = std::sqrt(w_var / log.records.size());
    return rep;
}

double iou(const MaskGrid& predicted, const MaskGrid& truth) {
    require_same_shape(predicted, truth, "iou");
    long inter = 0, uni = 0;
    for (int i = 0; i < predicted.height(); ++i)
        for (int j = 0; j < predicted.width(); ++j) {
            const bool a = predicted.at(i, j) != 0;
            const bool b = truth.at(i, j) != 0;
            inter += a && b;
            uni += a || b;
        }
    if (uni == 0) return 1.0;
    return double(inter) / double(uni);
}

namespace {

/// Total-least-squares line through a point set; returns its shortest
/// distance to the origin. Orthogonal direction from the 2x2 covariance.
double line_distance_to_origin(const std::vector<Vec2>& pts) {
    const double n = double(pts.size());
    Vec2 mean{0.0, 0.0};
    for (const Vec2& p : pts) mean = mean + p;
    mean = mean * (1.0 / n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const Vec2& p : pts) {
        const double dx = p.x - mean.x, dy = p.y - mean.y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    // Principal direction angle of the scatter (largest eigenvector).
    const double angle = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    const Vec2 dir{std::cos(angle), std::sin(angle)};
    return std::abs(dir.cross(Vec2{0.0, 0.0} - mean));
}

}  // namespace

LaneOffsets lidar_style_offset(const std::vector<Vec2>& points) {
    if (points.size() < 4)
        throw std::invalid_argument("lidar_style_offset: need at least 4 points");

    // 1-D two-means on y, seeded from the extremes.
    double lo = points[0].y, hi = points[0].y;
    for (const Vec2& p : points) {
        lo = std::min(lo, p.y);
        hi = std::max(hi, p.y);
    }
    double c0 = lo, c1 = hi;
    for (int iter = 0; iter < 32; ++iter) {
        double s0 = 0.0, s1 = 0.0;
        int n0 = 0, n1 = 0;
        for (const Vec2& p : points) {
            if (std::abs(p.y - c0) <= std::abs(p.y - c1)) {
                s0 += p.y;
                ++n0;
            } else {
                s1 += p.y;
                ++n1;
            }
        }
        if (n0 == 0 || n1 == 0) break;
        const double m0 = s0 / n0, m1 = s1 / n1;
        if (m0 == c0 && m1 == c1) break;
        c0 = m0;
        c1 = m1;
    }
    const double split = 0.5 * (c0 + c1);

    std::vector<Vec2> left, right;
    for (const Vec2& p : points)
        (p.y > split ? left : right).push_back(p);
    if (left.size() < 2 || right.size() < 2)
        throw std::invalid_argument(
            "lidar_style_offset: a lateral cluster has fewer than 2 points");

    return {line_distance_to_origin(left), line_distance_to_origin(right)};
}

AggregateReport aggregate(const std::vector<MetricsReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("aggregate: no reports");
    AggregateReport agg;
    agg.runs = static_cast<int>(reports.size());

    auto fields = [](MetricsReport& r) {
        return std::array<double*, 7>{&r.clearance_s, &r.mae_m,  &r.mse_m2,
                                      &r.rmse_m,      &r.cum_heading_avg_rad,
                                      &r.v_avg_mps,   &r.omega_stddev_radps};
    };
    std::array<double, 7> sum{}, sq{};
    for (const MetricsReport& rep : reports) {
        MetricsReport tmp = rep;
        auto fs = fields(tmp);
        for (std::size_t k = 0; k < fs.size(); ++k) {
            sum[k] += *fs[k];
            sq[k] += *fs[k] * *fs[k];
        }
        if (rep.termination == Termination::Finished) ++agg.finished;
    }
    auto ms = fields(agg.mean);
    auto ss = fields(agg.stddev);
    for (std::size_t k = 0; k < ms.size(); ++k) {
        *ms[k] = sum[k] / agg.runs;
        const double var = std::max(0.0, sq[k] / agg.runs - *ms[k] * *ms[k]);
        *ss[k] = std::sqrt(var);
    }
    agg.mean.termination = reports.front().termination;
    return agg;
}

std::string metrics_to_csv(const MetricsReport& r) {
    char buf[512];
    std::string out =
        "clearance_s,mae_m,mse_m2,rmse_m,cum_heading_avg_rad,v_avg_mps,"
        "omega_stddev_radps,termination,samples\n";
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%s,%d\n",
                  r.clearance_s, r.mae_m, r.mse_m2, r.rmse_m,
                  r.cum_heading_avg_rad, r.v_avg_mps, r.omega_stddev_radps,
                  termination_name(r.termination).c_str(), r.samples);
    return out + buf;
}

std::string metrics_to_text(const MetricsReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "clearance   %8.3f s\n"
                  "MAE         %8.4f m\n"
                  "MSE         %8.4f m^2\n"
                  "RMSE        %8.4f m\n"
                  "cum gamma   %8.4f rad\n"
                  "v_avg       %8.4f m/s\n"
                  "omega std   %8.4f rad/s\n"
                  "termination %s (%d samples)\n",
                  r.clearance_s, r.mae_m, r.mse_m2, r.rmse_m,
                  r.cum_heading_avg_rad, r.v_avg_mps, r.omega_stddev_radps,
                  termination_name(r.termination).c_str(), r.samples);
    return buf;
}

}  // namespace rowsim
