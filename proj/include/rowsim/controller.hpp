#pragma once

namespace rowsim {

/// Velocity-law parameters. The published quadratic steering law is
/// one-signed in the error as printed; the default implementation uses the
/// signed-magnitude form d*|d| so the turn direction follows the error sign.
/// literal_eq10 restores the printed behavior for comparison.
struct ControllerConfig {
    double v_max{0.5};
    double omega_max{1.0};
    double k_omega{0.01};
    double ema_lambda{0.5};
    int frame_width{224};
    bool literal_eq10{false};

    void validate() const;
};

struct VelocityCommand {
    double v{0.0};
    double omega{0.0};
};

/// Previous smoothed command; (0, 0) at episode start.
struct EmaState {
    VelocityCommand smoothed{};
};

/// Signed pixel distance from frame center: d = x_h - w/2, positive when
/// the row center lies right of the frame center.
double center_error(double x_h, int frame_width);

/// v = v_max (1 - d^2/(w/2)^2), omega = -k omega_max d|d| / w^2, with d
/// clamped to [-w/2, w/2] and omega clamped to [-omega_max, omega_max].
VelocityCommand raw_command(double d, const ControllerConfig& cfg);

/// Exponential moving average: out = (1-lambda) prev + lambda raw.
VelocityCommand smooth_command(const VelocityCommand& raw, EmaState& state,
                               double lambda);

/// Feeds a zero raw command through the EMA so the platform decelerates
/// smoothly when the estimator reports no passage.
VelocityCommand no_passage_policy(EmaState& state, double lambda);

}  // namespace rowsim
