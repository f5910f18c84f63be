#include "rowsim/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rowsim {

void ControllerConfig::validate() const {
    if (v_max <= 0.0) throw std::invalid_argument("controller.v_max must be positive");
    if (omega_max <= 0.0)
        throw std::invalid_argument("controller.omega_max must be positive");
    if (k_omega <= 0.0)
        throw std::invalid_argument("controller.k_omega must be positive");
    if (ema_lambda <= 0.0 || ema_lambda > 1.0)
        throw std::invalid_argument("controller.ema_lambda must be in (0,1]");
    if (frame_width <= 0)
        throw std::invalid_argument("controller.frame_width must be positive");
}

double center_error(double x_h, int frame_width) {
    return x_h - 0.5 * frame_width;
}

VelocityCommand raw_command(double d, const ControllerConfig& cfg) {
    const double half = 0.5 * cfg.frame_width;
    d = std::clamp(d, -half, half);

    VelocityCommand cmd;
    cmd.v = cfg.v_max * (1.0 - (d * d) / (half * half));

    const double w2 = double(cfg.frame_width) * cfg.frame_width;
    const double shape = cfg.literal_eq10 ? d * d : d * std::abs(d);
    cmd.omega = std::clamp(-cfg.k_omega * cfg.omega_max * shape / w2,
                           -cfg.omega_max, cfg.omega_max);
    return cmd;
}

VelocityCommand smooth_command(const VelocityCommand& raw, EmaState& state,
                               double lambda) {
    VelocityCommand out;
    out.v = (1.0 - lambda) * state.smoothed.v + lambda * raw.v;
    out.omega = (1.0 - lambda) * state.smoothed.omega + lambda * raw.omega;
    state.smoothed = out;
    return out;
}

VelocityCommand no_passage_policy(EmaState& state, double lambda) {
    return smooth_command(VelocityCommand{0.0, 0.0}, state, lambda);
}

}  // namespace rowsim
