#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "tethersim/dynamics.hpp"
#include "tethersim/geometry.hpp"
#include "tethersim/perception.hpp"

namespace tethersim {

// Image-based visual servoing. Pixel errors map to body-frame velocity with
// image-h error driving surge (x) and image-w error driving sway (y); the sway
// sign depends on the camera facing because an up-facing camera mirrors lateral
// offsets. Inside the safe region the law is proportional; in the integration
// region it commands the per-axis maximum toward the tag.
struct IbvsConfig {
    double gain_x_mps_per_px{0.012};   // applied to image-h error
    double gain_y_mps_per_px{0.0015};  // applied to image-w error
    double xi_max_x_mps{0.4};
    double xi_max_y_mps{0.4};
    CameraFacing facing{CameraFacing::Up};
};

inline ControlInput ibvs_command(const ImageObservation& obs, const CameraModel& cam,
                                 const IbvsConfig& cfg) {
    if (obs.region == Region::OutOfView || !obs.pixel) {
        throw std::invalid_argument("ibvs requires the tag in view");
    }
    const double err_w = obs.pixel->w - cam.center_w();
    const double err_h = obs.pixel->h - cam.center_h();
    const double y_sign = cfg.facing == CameraFacing::Up ? 1.0 : -1.0;
    ControlInput u;
    u.x = -cfg.gain_x_mps_per_px * err_h;
    u.y = y_sign * cfg.gain_y_mps_per_px * err_w;
    if (obs.region == Region::Integration) {
        u.x = sgn(u.x) * cfg.xi_max_x_mps;
        u.y = sgn(u.y) * cfg.xi_max_y_mps;
    } else {
        u.x = clamp_abs(u.x, cfg.xi_max_x_mps);
        u.y = clamp_abs(u.y, cfg.xi_max_y_mps);
    }
    return u;
}

// Obstacle repulsion from the forward sonar: active only within safe_distance,
// magnitude min(alpha/d, xi_max) per axis, pushing backward (-x) and to the
// side selected by lambda (+1 left, -1 right).
struct AvoidanceConfig {
    double alpha{0.34};           // repulsion strength, m^2/s
    double safe_distance_m{1.0};  // activation range
    double xi_max_x_mps{0.44};
    double xi_max_y_mps{0.4};
};

inline ControlInput avoidance_command(const SonarReading& sonar, const AvoidanceConfig& cfg,
                                      int lambda) {
    if (lambda != 1 && lambda != -1) throw std::invalid_argument("lambda must be +1 or -1");
    ControlInput u;
    if (!sonar.range_m) return u;
    const double d = *sonar.range_m;
    if (!(d > 0.0)) throw std::invalid_argument("sonar range must be positive");
    if (d > cfg.safe_distance_m) return u;
    u.x = -std::min(cfg.alpha / d, cfg.xi_max_x_mps);
    u.y = static_cast<double>(lambda) * std::min(cfg.alpha / d, cfg.xi_max_y_mps);
    return u;
}

// Waypoint PD for the surface vehicle. World-frame error PD rotated into the
// body frame, clamped per axis, plus a proportional heading hold that slowly
// returns the hull to the nominal yaw after an injected pulse. Waypoints
// advance inside the capture radius; once the final waypoint has been captured
// the command latches to zero.
struct PlannerConfig {
    std::vector<Vec2> waypoints;
    double kp_per_s{1.5};
    double kd{0.5};
    double capture_radius_m{0.2};
    double max_speed_mps{0.4};
    double yaw_kp_per_s{0.1};
};

struct PlannerState {
    std::size_t waypoint_index{0};
    bool finished{false};
};

inline ControlInput planner_command(const RobotState& asv, const PlannerConfig& cfg,
                                    PlannerState& st) {
    if (cfg.waypoints.empty()) throw std::invalid_argument("planner needs at least one waypoint");
    ControlInput u;
    if (st.finished) return u;
    while ((cfg.waypoints[st.waypoint_index] - asv.position).norm() <= cfg.capture_radius_m) {
        if (st.waypoint_index + 1 >= cfg.waypoints.size()) {
            st.finished = true;
            return u;
        }
        ++st.waypoint_index;
    }
    const Vec2 err = cfg.waypoints[st.waypoint_index] - asv.position;
    const Vec2 vel_world = rotate({asv.velocity.x, asv.velocity.y}, asv.yaw_rad);
    // Clamp in the world frame before rotating so that a transient yaw offset
    // cannot redirect a large unclamped error toward the wrong world direction.
    const Vec2 raw = err * cfg.kp_per_s - vel_world * cfg.kd;
    const Vec2 u_world{clamp_abs(raw.x, cfg.max_speed_mps), clamp_abs(raw.y, cfg.max_speed_mps)};
    const Vec2 u_body = rotate(u_world, -asv.yaw_rad);
    u.x = clamp_abs(u_body.x, cfg.max_speed_mps);
    u.y = clamp_abs(u_body.y, cfg.max_speed_mps);
    u.yaw = -cfg.yaw_kp_per_s * wrap_angle(asv.yaw_rad);
    return u;
}

// Depth/attitude hold for the underwater vehicle: PD toward a target depth and
// level roll/pitch.
struct DepthHoldConfig {
    double target_depth_m{-1.5};
    double kp_per_s{1.0};
    double kd{0.5};
    double attitude_kp_per_s{1.0};
    double attitude_kd{0.5};
};

inline ControlInput depth_hold_command(const RobotState& auv, const DepthHoldConfig& cfg) {
    ControlInput u;
    u.z = cfg.kp_per_s * (cfg.target_depth_m - auv.z_m) - cfg.kd * auv.velocity.z;
    u.roll = -cfg.attitude_kp_per_s * wrap_angle(auv.roll_rad) - cfg.attitude_kd * auv.velocity.roll;
    u.pitch =
        -cfg.attitude_kp_per_s * wrap_angle(auv.pitch_rad) - cfg.attitude_kd * auv.velocity.pitch;
    return u;
}

}  // namespace tethersim
