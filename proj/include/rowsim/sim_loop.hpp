#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rowsim/camera.hpp"
#include "rowsim/controller.hpp"
#include "rowsim/mask_pipeline.hpp"
#include "rowsim/robot_state.hpp"
#include "rowsim/row_guidance.hpp"
#include "rowsim/world.hpp"

namespace rowsim {

/// Sensing/inference/command rates. The physics grid must tick at an
/// integer multiple of every activity so the schedule is exact.
struct RateConfig {
    int physics_hz{120};
    int camera_hz{30};
    int inference_hz{20};
    int command_hz{5};

    void validate() const;
};

enum class Termination { Finished, Collision, Stalled, Timeout };

std::string termination_name(Termination t);

/// One record per command tick.
struct LogRecord {
    double t{0.0};
    RobotState state;
    VelocityCommand raw;
    VelocityCommand smoothed;
    double x_h{0.0};
    int tie_count{0};
    EstimateStatus status{EstimateStatus::Ok};
    double progress{0.0};
};

struct EpisodeLog {
    std::vector<LogRecord> records;
    Termination termination{Termination::Timeout};
    double termination_time{0.0};
    RobotState final_state;
    long frames_captured{0};
    long estimates_computed{0};
    long commands_issued{0};
    double track_goal{20.0};
};

struct EpisodeParams {
    int lane{1};
    double track_goal{20.0};
    double start_advance{1.0};   // meters into the row along the centerline
    double start_offset{0.0};    // signed lateral offset from the centerline
    double start_heading{0.0};   // heading error relative to the lane tangent
    double footprint_radius{0.3};
    double stall_window{5.0};
    double stall_min_progress{0.05};
    double timeout{150.0};
};

struct EpisodeConfig {
    PipelineConfig pipeline;
    ControllerConfig controller;
    RateConfig rates;
    CameraModel camera;
    std::optional<CorruptionModel> corruption;  // per-frame seeds are derived
    EpisodeParams params;
    /// Observation hook, invoked with each frame the estimator consumes
    /// (post-corruption). Must not mutate episode state.
    std::function<void(long frame_index, const FramePair& frame)> frame_hook;
};

/// Constant-twist integration step; `disturbance` adds to the yaw rate.
RobotState step_kinematics(const RobotState& state, const VelocityCommand& cmd,
                           double dt, double disturbance = 0.0);

/// Runs one closed-loop episode. Frames are captured at camera_hz, the
/// estimator consumes the freshest capture at inference_hz, commands update
/// at command_hz and are held between ticks. Deterministic in `seed`.
EpisodeLog run_episode(const CropRowWorld& world, const EpisodeConfig& config,
                       std::uint64_t seed);

/// Documented column order; '#' comment lines carry termination and rate
/// bookkeeping.
std::string episode_to_csv(const EpisodeLog& log);

}  // namespace rowsim
