#pragma once

#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

#include "tethersim/control.hpp"
#include "tethersim/dynamics.hpp"
#include "tethersim/geometry.hpp"
#include "tethersim/perception.hpp"

namespace tethersim {

// Planner-weight reduction (level 1, leader side). Samples the tag region at
// the protocol rate; when every sample in the trailing window signals pressure
// (integration region, or tag lost), the planner weight drops to beta * k_v.
// Any safe sample in the window restores it immediately.
struct WeightingState {
    double k_v{1.0};
    double k_p{1.0};
    double beta{0.2};
    double window_s{4.0};
    double rate_hz{1.0};
    std::deque<int> history;

    std::size_t window_samples() const {
        return static_cast<std::size_t>(std::lround(window_s * rate_hz));
    }
    bool reduced() const { return k_p != k_v; }
};

inline WeightingState update_weighting(WeightingState w, Region region, double /*t_s*/) {
    const int pressure = region == Region::Safe ? 0 : 1;
    w.history.push_back(pressure);
    while (w.history.size() > w.window_samples()) w.history.pop_front();
    bool all_pressure = w.history.size() == w.window_samples();
    for (int k : w.history) all_pressure = all_pressure && k == 1;
    w.k_p = all_pressure ? w.beta * w.k_v : w.k_v;
    return w;
}

// Yank generator (level 2, leader side). While the leader sits within
// wall_safe_m of a lateral wall and the tag is in the integration region, it
// injects a constant yaw-rate pulse away from the wall for yank_duration_s.
// The active window doubles as the cooldown, so pulses are atomic and starts
// are separated by at least the duration.
struct Level2State {
    double wall_safe_m{0.5};
    double yank_rate_radps{1.0};
    double yank_duration_s{1.0};
    int mu{0};  // 0 until the first yank
    double active_until_s{-std::numeric_limits<double>::infinity()};

    bool active(double t_s) const { return t_s < active_until_s; }
};

/// Returns the yaw-rate injection for this instant and the advanced state.
inline std::pair<double, Level2State> level2_indicator(Level2State l2, double wall_distance_m,
                                                       Region region, double t_s) {
    if (!std::isfinite(wall_distance_m) || wall_distance_m == 0.0) {
        throw std::invalid_argument("wall distance must be finite and non-zero");
    }
    if (l2.active(t_s)) return {l2.mu * l2.yank_rate_radps, l2};
    if (std::abs(wall_distance_m) <= l2.wall_safe_m && region == Region::Integration) {
        l2.mu = wall_distance_m > 0.0 ? 1 : -1;
        l2.active_until_s = t_s + l2.yank_duration_s;
        return {l2.mu * l2.yank_rate_radps, l2};
    }
    return {0.0, l2};
}

// Yank detector (level 2, follower side). Watches the relative yaw; when it
// changes by at least threshold_rad over the lookback window, the follower
// adopts the sign of the current relative yaw as its new avoidance side.
struct Level2Detector {
    double threshold_rad{0.5};
    double lookback_s{1.0};
    std::deque<RelativeYawObservation> history;
};

/// Feeds one observation; returns the new lambda when a yank is recognized.
inline std::optional<int> detect_level2(Level2Detector& det, const RelativeYawObservation& obs) {
    det.history.push_back(obs);
    const double cutoff = obs.t_s - det.lookback_s + 1e-9;
    while (det.history.size() >= 2 && det.history[1].t_s <= cutoff) det.history.pop_front();
    const auto& oldest = det.history.front();
    if (oldest.t_s > cutoff) return std::nullopt;  // history does not span the window yet
    const double delta = wrap_angle(obs.yaw_rad - oldest.yaw_rad);
    if (std::abs(delta) < det.threshold_rad) return std::nullopt;
    if (obs.yaw_rad == 0.0) return std::nullopt;
    return obs.yaw_rad > 0.0 ? 1 : -1;
}

/// Leader command: weighted planner plus visual tether, with the level-2 yaw
/// pulse added on the yaw axis, clamped to the leader's saturation.
inline ControlInput compose_asv(const ControlInput& planner, const ControlInput& ibvs,
                                double yaw_injection_radps, const WeightingState& w,
                                const DynamicsParams& params) {
    ControlInput u;
    u.x = w.k_p * planner.x + w.k_v * ibvs.x;
    u.y = w.k_p * planner.y + w.k_v * ibvs.y;
    u.yaw = w.k_p * planner.yaw + w.k_v * ibvs.yaw + yaw_injection_radps;
    return clamp(u, params);
}

/// Follower command: obstacle repulsion plus visual tether plus depth hold,
/// clamped to the follower's saturation.
inline ControlInput compose_auv(const ControlInput& avoidance, const ControlInput& ibvs,
                                const ControlInput& depth_hold, const DynamicsParams& params) {
    ControlInput u;
    const auto members = BodyVelocity::axes();
    for (auto m : members) u.*m = avoidance.*m + ibvs.*m + depth_hold.*m;
    return clamp(u, params);
}

}  // namespace tethersim
