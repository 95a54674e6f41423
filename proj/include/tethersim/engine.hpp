#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tethersim/control.hpp"
#include "tethersim/dynamics.hpp"
#include "tethersim/geometry.hpp"
#include "tethersim/paradigm.hpp"
#include "tethersim/perception.hpp"
#include "tethersim/world.hpp"

namespace tethersim {

enum class Mode { Baseline, DogWalking };

inline const char* to_string(Mode m) { return m == Mode::Baseline ? "baseline" : "dog_walking"; }

enum class SimStatus { TargetReached, Stuck, Collision, FormationBroken, Timeout };

inline const char* to_string(SimStatus s) {
    switch (s) {
        case SimStatus::TargetReached: return "target_reached";
        case SimStatus::Stuck: return "stuck";
        case SimStatus::Collision: return "collision";
        case SimStatus::FormationBroken: return "formation_broken";
        default: return "timeout";
    }
}

struct ParadigmConfig {
    double k_v{1.0};
    double beta{0.2};
    double window_s{4.0};
    double protocol_rate_hz{1.0};
    double wall_safe_m{0.5};
    double yank_rate_radps{1.0};
    double yank_duration_s{1.0};
    double detect_threshold_rad{0.5};
    double detect_lookback_s{1.0};
    int initial_lambda{1};
};

struct SimConfig {
    double max_time_s{120.0};
    double asv_footprint_m{0.30};
    double auv_footprint_m{0.25};
    int formation_grace_steps{5};
    double stuck_window_s{10.0};
    double stuck_epsilon_m{0.05};
    std::uint32_t seed{1};
};

// One row per physics step. States are post-step (the terminal state is the
// last record); observations and commands are the ones computed at the start
// of the step from the pre-step states.
struct TraceRecord {
    double t_s{0.0};
    RobotState asv;
    RobotState auv;
    ImageObservation asv_view;  // follower tag seen by the leader
    ImageObservation auv_view;  // leader tag seen by the follower
    SonarReading sonar;
    double wall_distance_m{0.0};
    ControlInput planner_cmd;
    ControlInput asv_ibvs_cmd;
    double yaw_injection_radps{0.0};
    ControlInput avoidance_cmd;
    ControlInput auv_ibvs_cmd;
    ControlInput depth_cmd;
    double k_p{1.0};
    double k_v{1.0};
    int lambda{1};
    int mu{0};
    bool yank_active{false};
    int level{0};
};

struct SimOutcome {
    SimStatus status{SimStatus::Timeout};
    double final_time_s{0.0};
    std::vector<TraceRecord> trace;
};

// Everything one run needs. Scenario builders in scenarios.hpp produce these.
struct RunSetup {
    WorldModel world;
    Mode mode{Mode::DogWalking};
    double dt_s{0.02};
    DynamicsParams asv_dynamics;
    DynamicsParams auv_dynamics;
    CameraModel camera;
    IbvsConfig asv_ibvs;
    IbvsConfig auv_ibvs;
    SonarConfig sonar;
    AvoidanceConfig avoidance;
    PlannerConfig planner;
    DepthHoldConfig depth_hold;
    ParadigmConfig paradigm;
    SimConfig sim;

    void validate() const;
};

inline void RunSetup::validate() const {
    world.validate();
    camera.validate();
    asv_dynamics.validate();
    auv_dynamics.validate();
    if (asv_dynamics.dt_s != dt_s || auv_dynamics.dt_s != dt_s) {
        throw std::invalid_argument("dynamics dt must match the engine dt");
    }
    if (!(paradigm.protocol_rate_hz > 0.0)) {
        throw std::invalid_argument("protocol rate must be positive");
    }
    const double steps = 1.0 / (paradigm.protocol_rate_hz * dt_s);
    if (std::abs(steps - std::lround(steps)) > 1e-9) {
        throw std::invalid_argument("protocol rate must divide the physics rate");
    }
    if (planner.waypoints.empty()) throw std::invalid_argument("planner needs waypoints");
    if (!(sim.max_time_s > 0.0)) throw std::invalid_argument("max time must be positive");
    if (paradigm.initial_lambda != 1 && paradigm.initial_lambda != -1) {
        throw std::invalid_argument("initial lambda must be +1 or -1");
    }
    if (!(sonar.cone_half_angle_rad > 0.0) || sonar.cone_half_angle_rad > kPi / 2.0) {
        throw std::invalid_argument("sonar cone half angle must lie in (0, pi/2]");
    }
}

/// True when both robots stayed within stuck_epsilon of their final positions
/// over the trailing window while the leader has not captured the final
/// waypoint. Needs the trace to span the whole window.
inline bool detect_stuck(const std::vector<TraceRecord>& trace, double window_s, double epsilon_m,
                         const PlannerConfig& planner) {
    if (trace.empty()) return false;
    const TraceRecord& last = trace.back();
    if ((planner.waypoints.back() - last.asv.position).norm() <= planner.capture_radius_m) {
        return false;
    }
    const double t_start = last.t_s - window_s;
    if (trace.front().t_s > t_start + 1e-9) return false;
    for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
        if (it->t_s < t_start - 1e-9) break;
        if ((it->asv.position - last.asv.position).norm() >= epsilon_m) return false;
        if ((it->auv.position - last.auv.position).norm() >= epsilon_m) return false;
    }
    return true;
}

namespace detail {

struct ParadigmRuntime {
    WeightingState weighting;
    Level2State level2;
    Level2Detector detector;
    int lambda{1};
};

inline int protocol_period_steps(const RunSetup& s) {
    return static_cast<int>(std::lround(1.0 / (s.paradigm.protocol_rate_hz * s.dt_s)));
}

}  // namespace detail

/// Runs one scenario to termination. Both agents sense the same pre-step
/// snapshot each cycle, so neither sees the other's current-step action.
/// Termination priority: Collision > FormationBroken > TargetReached > Stuck >
/// Timeout.
inline SimOutcome run(const RunSetup& setup) {
    setup.validate();

    RobotState asv;
    asv.kind = RobotKind::Asv;
    asv.position = setup.world.asv_start;
    RobotState auv;
    auv.kind = RobotKind::Auv;
    auv.position = setup.world.auv_start;
    auv.z_m = setup.world.auv_hold_depth_m;

    detail::ParadigmRuntime rt;
    rt.weighting.k_v = setup.paradigm.k_v;
    rt.weighting.k_p = setup.paradigm.k_v;
    rt.weighting.beta = setup.paradigm.beta;
    rt.weighting.window_s = setup.paradigm.window_s;
    rt.weighting.rate_hz = setup.paradigm.protocol_rate_hz;
    rt.level2.wall_safe_m = setup.paradigm.wall_safe_m;
    rt.level2.yank_rate_radps = setup.paradigm.yank_rate_radps;
    rt.level2.yank_duration_s = setup.paradigm.yank_duration_s;
    rt.detector.threshold_rad = setup.paradigm.detect_threshold_rad;
    rt.detector.lookback_s = setup.paradigm.detect_lookback_s;
    rt.lambda = setup.paradigm.initial_lambda;

    PlannerState planner_state;
    std::mt19937 rng(setup.sim.seed);
    const int protocol_period = detail::protocol_period_steps(setup);
    const long max_steps = static_cast<long>(std::ceil(setup.sim.max_time_s / setup.dt_s));

    SimOutcome out;
    out.trace.reserve(static_cast<std::size_t>(max_steps));
    int out_of_view_run = 0;

    for (long step_idx = 0; step_idx < max_steps; ++step_idx) {
        const double t = static_cast<double>(step_idx) * setup.dt_s;

        // Sense from the previous step's states.
        const ImageObservation asv_view =
            observe_tag(asv, auv, setup.camera, CameraFacing::Down, t, &rng);
        const ImageObservation auv_view =
            observe_tag(auv, asv, setup.camera, CameraFacing::Up, t, &rng);
        const SonarReading sonar = read_sonar(auv, setup.world, setup.sonar, t, &rng);
        const double wall_dist = signed_wall_distance(setup.world, asv.position, asv.yaw_rad);
        const RelativeYawObservation rel_yaw = observe_relative_yaw(auv, asv, t);

        // Leader-side protocol.
        if (setup.mode == Mode::DogWalking && step_idx % protocol_period == 0) {
            rt.weighting = update_weighting(rt.weighting, asv_view.region, t);
        }
        double yaw_injection = 0.0;
        if (setup.mode == Mode::DogWalking) {
            auto [inj, l2] = level2_indicator(rt.level2, wall_dist, asv_view.region, t);
            yaw_injection = inj;
            rt.level2 = l2;
        }

        // Follower-side protocol.
        if (setup.mode == Mode::DogWalking) {
            if (auto lam = detect_level2(rt.detector, rel_yaw)) rt.lambda = *lam;
        }

        // Controllers. A lost tag contributes no visual command while the
        // formation grace counter runs.
        const ControlInput planner_cmd = planner_command(asv, setup.planner, planner_state);
        const ControlInput asv_ibvs = asv_view.region == Region::OutOfView
                                          ? ControlInput{}
                                          : ibvs_command(asv_view, setup.camera, setup.asv_ibvs);
        const ControlInput auv_ibvs = auv_view.region == Region::OutOfView
                                          ? ControlInput{}
                                          : ibvs_command(auv_view, setup.camera, setup.auv_ibvs);
        const ControlInput avoidance = avoidance_command(sonar, setup.avoidance, rt.lambda);
        const ControlInput depth_cmd = depth_hold_command(auv, setup.depth_hold);

        const ControlInput asv_cmd =
            compose_asv(planner_cmd, asv_ibvs, yaw_injection, rt.weighting, setup.asv_dynamics);
        const ControlInput auv_cmd =
            compose_auv(avoidance, auv_ibvs, depth_cmd, setup.auv_dynamics);

        asv = step(asv, asv_cmd, setup.asv_dynamics);
        auv = step(auv, auv_cmd, setup.auv_dynamics);

        TraceRecord rec;
        rec.t_s = t + setup.dt_s;
        rec.asv = asv;
        rec.auv = auv;
        rec.asv_view = asv_view;
        rec.auv_view = auv_view;
        rec.sonar = sonar;
        rec.wall_distance_m = wall_dist;
        rec.planner_cmd = planner_cmd;
        rec.asv_ibvs_cmd = asv_ibvs;
        rec.yaw_injection_radps = yaw_injection;
        rec.avoidance_cmd = avoidance;
        rec.auv_ibvs_cmd = auv_ibvs;
        rec.depth_cmd = depth_cmd;
        rec.k_p = rt.weighting.k_p;
        rec.k_v = rt.weighting.k_v;
        rec.lambda = rt.lambda;
        rec.mu = rt.level2.mu;
        rec.yank_active = yaw_injection != 0.0;
        const bool avoidance_on = avoidance.x != 0.0 || avoidance.y != 0.0;
        rec.level = rec.yank_active ? 2 : (rt.weighting.reduced() || avoidance_on ? 1 : 0);
        out.trace.push_back(rec);
        out.final_time_s = rec.t_s;

        if (asv_view.region == Region::OutOfView || auv_view.region == Region::OutOfView) {
            ++out_of_view_run;
        } else {
            out_of_view_run = 0;
        }

        // Termination, highest priority first.
        if (collides(setup.world, auv.position, setup.sim.auv_footprint_m) ||
            outside_walls(setup.world, asv.position, setup.sim.asv_footprint_m)) {
            out.status = SimStatus::Collision;
            return out;
        }
        if (out_of_view_run > setup.sim.formation_grace_steps) {
            out.status = SimStatus::FormationBroken;
            return out;
        }
        const bool asv_at_target =
            (setup.planner.waypoints.back() - asv.position).norm() <= setup.planner.capture_radius_m;
        const ImageObservation post_asv_view =
            observe_tag(asv, auv, setup.camera, CameraFacing::Down, rec.t_s, nullptr);
        const ImageObservation post_auv_view =
            observe_tag(auv, asv, setup.camera, CameraFacing::Up, rec.t_s, nullptr);
        if (asv_at_target && post_asv_view.region != Region::OutOfView &&
            post_auv_view.region != Region::OutOfView) {
            out.status = SimStatus::TargetReached;
            return out;
        }
        if (step_idx % protocol_period == protocol_period - 1 &&
            detect_stuck(out.trace, setup.sim.stuck_window_s, setup.sim.stuck_epsilon_m,
                         setup.planner)) {
            out.status = SimStatus::Stuck;
            return out;
        }
    }
    out.status = SimStatus::Timeout;
    return out;
}

}  // namespace tethersim
