#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "tethersim/geometry.hpp"

namespace tethersim {

// Body-frame rates: x forward, y left, z up, plus roll/pitch/yaw rates.
// Used both for commanded velocities and for the velocity part of the state.
struct BodyVelocity {
    double x{0.0};
    double y{0.0};
    double z{0.0};
    double roll{0.0};
    double pitch{0.0};
    double yaw{0.0};

    static constexpr std::array<double BodyVelocity::*, 6> axes() {
        return {&BodyVelocity::x,    &BodyVelocity::y,     &BodyVelocity::z,
                &BodyVelocity::roll, &BodyVelocity::pitch, &BodyVelocity::yaw};
    }
};

using ControlInput = BodyVelocity;

enum class RobotKind { Asv, Auv };

// The surface vehicle has no heave/roll/pitch freedom; the underwater vehicle
// holds roll and pitch at zero. Constrained axes stay exactly zero.
inline constexpr std::array<bool, 6> constrained_axes(RobotKind kind) {
    if (kind == RobotKind::Asv) return {false, false, true, true, true, false};
    return {false, false, false, true, true, false};
}

struct RobotState {
    RobotKind kind{RobotKind::Auv};
    Vec2 position;          // world frame, meters
    double z_m{0.0};        // world frame, 0 at the surface, negative below
    double roll_rad{0.0};
    double pitch_rad{0.0};
    double yaw_rad{0.0};    // from world +x, CCW positive, in (-pi, pi]
    BodyVelocity velocity;  // body frame
};

struct AxisDynamics {
    double tau_s{0.5};       // first-order velocity lag time constant
    double saturation{0.5};  // symmetric command/velocity bound
};

struct DynamicsParams {
    double dt_s{0.02};
    std::array<AxisDynamics, 6> axes{};  // x, y, z, roll, pitch, yaw

    void validate() const {
        if (!(dt_s > 0.0)) throw std::invalid_argument("dt must be positive");
        for (const auto& a : axes) {
            if (!(a.tau_s > 0.0)) throw std::invalid_argument("tau must be positive");
            if (!(a.saturation >= 0.0)) throw std::invalid_argument("saturation must be >= 0");
            if (dt_s > a.tau_s / 2.0 + 1e-12) {
                throw std::invalid_argument("dt must not exceed tau/2");
            }
        }
    }
};

inline DynamicsParams make_dynamics(double dt_s, double tau_s,
                                    const std::array<double, 6>& saturation) {
    DynamicsParams p;
    p.dt_s = dt_s;
    for (std::size_t i = 0; i < 6; ++i) p.axes[i] = {tau_s, saturation[i]};
    return p;
}

/// Component-wise saturation clamp. Idempotent.
inline ControlInput clamp(const ControlInput& cmd, const DynamicsParams& params) {
    ControlInput out = cmd;
    const auto members = BodyVelocity::axes();
    for (std::size_t i = 0; i < 6; ++i) {
        out.*members[i] = clamp_abs(out.*members[i], params.axes[i].saturation);
    }
    return out;
}

namespace detail {

inline bool finite(const BodyVelocity& v) {
    const auto members = BodyVelocity::axes();
    for (auto m : members) {
        if (!std::isfinite(v.*m)) return false;
    }
    return true;
}

inline bool finite(const RobotState& s) {
    return std::isfinite(s.position.x) && std::isfinite(s.position.y) && std::isfinite(s.z_m) &&
           std::isfinite(s.roll_rad) && std::isfinite(s.pitch_rad) && std::isfinite(s.yaw_rad) &&
           finite(s.velocity);
}

}  // namespace detail

/// Advances one control period: per-axis first-order velocity lag
/// v' = v + (dt/tau)(cmd - v), then semi-implicit Euler position update using
/// the new velocity rotated to the world frame by the pre-step yaw. Yaw wraps
/// to (-pi, pi]; constrained axes are forced to exactly zero.
inline RobotState step(const RobotState& state, const ControlInput& cmd,
                       const DynamicsParams& params) {
    if (!detail::finite(state) || !detail::finite(cmd)) {
        throw std::invalid_argument("non-finite state or command");
    }
    RobotState next = state;
    const auto members = BodyVelocity::axes();
    const auto mask = constrained_axes(state.kind);
    for (std::size_t i = 0; i < 6; ++i) {
        const double u = clamp_abs(cmd.*members[i], params.axes[i].saturation);
        const double v = state.velocity.*members[i];
        double vn = v + (params.dt_s / params.axes[i].tau_s) * (u - v);
        if (mask[i]) vn = 0.0;
        next.velocity.*members[i] = vn;
    }
    const Vec2 world_vel = rotate({next.velocity.x, next.velocity.y}, state.yaw_rad);
    next.position = state.position + world_vel * params.dt_s;
    next.z_m = state.z_m + next.velocity.z * params.dt_s;
    next.roll_rad = wrap_angle(state.roll_rad + next.velocity.roll * params.dt_s);
    next.pitch_rad = wrap_angle(state.pitch_rad + next.velocity.pitch * params.dt_s);
    next.yaw_rad = wrap_angle(state.yaw_rad + next.velocity.yaw * params.dt_s);
    if (state.kind == RobotKind::Asv) next.z_m = 0.0;
    if (mask[3]) next.roll_rad = 0.0;
    if (mask[4]) next.pitch_rad = 0.0;
    return next;
}

}  // namespace tethersim
