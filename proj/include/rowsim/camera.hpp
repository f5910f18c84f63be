#pragma once

#include <cstdint>
#include <string>

#include "rowsim/geometry.hpp"
#include "rowsim/grid.hpp"
#include "rowsim/robot_state.hpp"
#include "rowsim/world.hpp"

namespace rowsim {

/// Pinhole RGB-D stand-in. The optical center sits mount_offset_forward
/// ahead of the robot center along its heading, mount_height above the
/// terrain, and is pitched mount_pitch_up from horizontal before terrain
/// tilt is applied.
struct CameraModel {
    int width{224};
    int height{224};
    double horizontal_fov{1.204};
    double vertical_fov{1.204};
    double mount_offset_forward{0.20};
    double mount_pitch_up{0.2618};
    double mount_height{0.4};
    double max_range{20.0};
};

/// Co-registered confidence mask and depth map for one timestamp.
/// Depth holds Euclidean ray distance in meters; pixels with no hit within
/// max_depth carry the max_depth sentinel.
struct FramePair {
    FloatGrid soft_mask;
    FloatGrid depth;
    double timestamp{0.0};
    float max_depth{20.0f};
};

/// Parametric stand-in for segmentation-network error: plant-pixel dropout
/// and confidence degradation, background speckle, and range-scaled depth
/// noise (stddev = depth_noise_std_at_1m * range^2).
struct CorruptionModel {
    double dropout_rate{0.0};
    double speckle_rate{0.0};
    double confidence_noise_std{0.0};
    double depth_noise_std_at_1m{0.0};
    std::uint64_t rng_seed{0};
};

struct CameraPose {
    Vec3 origin;
    Mat3 rotation;  // camera-to-world; camera frame x forward, y left, z up
};

CameraPose compute_camera_pose(const CropRowWorld& world, const RobotState& robot,
                               const CameraModel& cam);

FramePair render_frame(const CropRowWorld& world, const RobotState& robot,
                       const CameraModel& cam);

FramePair corrupt_frame(const FramePair& frame, const CorruptionModel& model);

/// Masks are 8-bit PGM (value/maxval = confidence); depth maps are 16-bit
/// PGM in millimeters with a "# rowsim:max_range_mm=N" header comment.
FramePair load_frame_pair(const std::string& mask_path,
                          const std::string& depth_path);
void save_frame_pair(const FramePair& frame, const std::string& mask_path,
                     const std::string& depth_path);

}  // namespace rowsim
