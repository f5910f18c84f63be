#include "rowsim/sim_loop.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <stdexcept>

#include "rowsim/rng.hpp"

namespace rowsim {

void RateConfig::validate() const {
    if (command_hz <= 0 || inference_hz < command_hz || camera_hz < inference_hz ||
        physics_hz < camera_hz)
        throw std::invalid_argument(
            "rates must satisfy physics >= camera >= inference >= command > 0");
    for (int hz : {camera_hz, inference_hz, command_hz})
        if (physics_hz % hz != 0)
            throw std::invalid_argument(
                "rates.physics_hz must be an integer multiple of every rate");
}

std::string termination_name(Termination t) {
    switch (t) {
        case Termination::Finished: return "finished";
        case Termination::Collision: return "collision";
        case Termination::Stalled: return "stalled";
        case Termination::Timeout: return "timeout";
    }
    return "unknown";
}

RobotState step_kinematics(const RobotState& state, const VelocityCommand& cmd,
                           double dt, double disturbance) {
    if (dt <= 0.0) throw std::invalid_argument("step_kinematics: dt must be positive");
    const double rate = cmd.omega + disturbance;
    RobotState next = state;
    if (std::abs(rate) < 1e-9) {
        next.x += cmd.v * std::cos(state.theta) * dt;
        next.y += cmd.v * std::sin(state.theta) * dt;
        next.theta = wrap_angle(state.theta + rate * dt);
    } else {
        // Exact pose update under constant twist over the step.
        const double radius = cmd.v / rate;
        const double theta1 = state.theta + rate * dt;
        next.x += radius * (std::sin(theta1) - std::sin(state.theta));
        next.y -= radius * (std::cos(theta1) - std::cos(state.theta));
        next.theta = wrap_angle(theta1);
    }
    next.t = state.t + dt;
    return next;
}

EpisodeLog run_episode(const CropRowWorld& world, const EpisodeConfig& config,
                       std::uint64_t seed) {
    config.rates.validate();
    config.pipeline.validate();
    config.controller.validate();
    const EpisodeParams& p = config.params;
    if (p.track_goal <= 0.0 || p.timeout <= 0.0 || p.stall_window <= 0.0)
        throw std::invalid_argument("episode: goal, timeout and stall window "
                                    "must be positive");

    const Centerline centerline = ground_truth_centerline(world, p.lane);
    if (centerline.length() < p.start_advance + p.track_goal)
        throw std::invalid_argument(
            "episode: centerline shorter than start_advance + track_goal");

    // Start pose: advanced along the centerline, laterally offset, heading
    // error relative to the local tangent.
    const Vec2 start_pt = centerline.point_at(p.start_advance);
    const Vec2 tangent = centerline.tangent_at(p.start_advance);
    const Vec2 normal{-tangent.y, tangent.x};
    RobotState state;
    state.x = start_pt.x + normal.x * p.start_offset;
    state.y = start_pt.y + normal.y * p.start_offset;
    state.theta = wrap_angle(std::atan2(tangent.y, tangent.x) + p.start_heading);
    state.t = 0.0;

    const double start_s = centerline.project({state.x, state.y}).s;

    Rng disturbance_rng(derive_seed(seed, "disturbance"));
    MaskHistory history(config.pipeline.history_n);
    EmaState ema;

    EpisodeLog log;
    log.track_goal = p.track_goal;

    const int camera_every = config.rates.physics_hz / config.rates.camera_hz;
    const int inference_every = config.rates.physics_hz / config.rates.inference_hz;
    const int command_every = config.rates.physics_hz / config.rates.command_hz;
    const double dt = 1.0 / config.rates.physics_hz;

    const long max_ticks = static_cast<long>(std::llround(p.timeout * config.rates.physics_hz));
    const int stall_ticks =
        static_cast<int>(std::llround(p.stall_window * config.rates.command_hz));

    std::optional<RobotState> capture_pose;
    long capture_index = -1;
    long consumed_capture = -1;
    RowCenterEstimate latest{0.0, EstimateStatus::NoPassage, 0};
    bool have_estimate = false;
    VelocityCommand raw_cmd, applied_cmd;
    std::vector<double> progress_at_command;
    double progress = 0.0;

    auto finish = [&](Termination why, double when) {
        log.termination = why;
        log.termination_time = when;
        log.final_state = state;
    };

    for (long tick = 0;; ++tick) {
        if (tick > max_ticks) {
            finish(Termination::Timeout, state.t);
            break;
        }

        if (tick % camera_every == 0) {
            capture_pose = state;
            ++capture_index;
            ++log.frames_captured;
        }

        if (tick % inference_every == 0 && capture_pose &&
            capture_index != consumed_capture) {
            // Freshest capture wins; older frames are dropped unseen.
            FramePair frame = render_frame(world, *capture_pose, config.camera);
            if (config.corruption) {
                CorruptionModel m = *config.corruption;
                m.rng_seed = derive_seed(seed, "corruption",
                                         static_cast<std::uint64_t>(capture_index));
                frame = corrupt_frame(frame, m);
            }
            if (config.frame_hook) config.frame_hook(capture_index, frame);
            const EstimateResult r = estimate(frame, config.pipeline, history);
            latest = r.estimate;
            have_estimate = true;
            consumed_capture = capture_index;
            ++log.estimates_computed;
        }

        if (tick % command_every == 0) {
            if (have_estimate && latest.status == EstimateStatus::Ok) {
                raw_cmd = raw_command(
                    center_error(latest.center_column, config.controller.frame_width),
                    config.controller);
                applied_cmd =
                    smooth_command(raw_cmd, ema, config.controller.ema_lambda);
            } else {
                raw_cmd = VelocityCommand{0.0, 0.0};
                applied_cmd = no_passage_policy(ema, config.controller.ema_lambda);
            }
            ++log.commands_issued;

            LogRecord rec;
            rec.t = state.t;
            rec.state = state;
            rec.raw = raw_cmd;
            rec.smoothed = applied_cmd;
            rec.x_h = latest.center_column;
            rec.tie_count = latest.tie_count;
            rec.status = have_estimate ? latest.status : EstimateStatus::NoPassage;
            rec.progress = progress;
            log.records.push_back(rec);

            progress_at_command.push_back(progress);
            const int k = static_cast<int>(progress_at_command.size()) - 1;
            if (k >= stall_ticks &&
                progress_at_command[k] - progress_at_command[k - stall_ticks] <
                    p.stall_min_progress) {
                finish(Termination::Stalled, state.t);
                break;
            }
        }

        state = step_kinematics(
            state, applied_cmd, dt,
            disturbance_rng.normal(0.0, world.terrain.heading_disturbance_std));
        progress = centerline.project({state.x, state.y}).s - start_s;

        if (progress >= p.track_goal) {
            finish(Termination::Finished, state.t);
            break;
        }
        if (collision_check(world, state, p.footprint_radius)) {
            finish(Termination::Collision, state.t);
            break;
        }
    }
    return log;
}

std::string episode_to_csv(const EpisodeLog& log) {
    std::string out;
    char line[512];
    std::snprintf(line, sizeof(line), "# termination=%s time=%.12g goal=%.12g\n",
                  termination_name(log.termination).c_str(), log.termination_time,
                  log.track_goal);
    out += line;
    std::snprintf(line, sizeof(line),
                  "# frames_captured=%ld estimates=%ld commands=%ld\n",
                  log.frames_captured, log.estimates_computed, log.commands_issued);
    out += line;
    out += "t,x,y,theta,x_h,tie_count,status,raw_v,raw_omega,cmd_v,cmd_omega,"
           "progress\n";
    for (const LogRecord& r : log.records) {
        std::snprintf(line, sizeof(line),
                      "%.12g,%.12g,%.12g,%.12g,%.12g,%d,%s,%.12g,%.12g,%.12g,"
                      "%.12g,%.12g\n",
                      r.t, r.state.x, r.state.y, r.state.theta, r.x_h, r.tie_count,
                      r.status == EstimateStatus::Ok ? "ok" : "no_passage", r.raw.v,
                      r.raw.omega, r.smoothed.v, r.smoothed.omega, r.progress);
        out += line;
    }
    return out;
}

}  // namespace rowsim
