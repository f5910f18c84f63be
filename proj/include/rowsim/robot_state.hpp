#pragma once

namespace rowsim {

/// Planar pose of the platform. theta is wrapped to (-pi, pi].
struct RobotState {
    double x{0.0};
    double y{0.0};
    double theta{0.0};
    double t{0.0};
};

}  // namespace rowsim
