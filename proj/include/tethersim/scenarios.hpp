#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tethersim/engine.hpp"

namespace tethersim {

struct ScenarioDef {
    std::string name;
    RunSetup setup;
    std::optional<SimStatus> expected_outcome;
};

struct RunMetrics {
    SimStatus status{SimStatus::Timeout};
    std::optional<double> time_to_target_s;
    double min_obstacle_clearance_m{std::numeric_limits<double>::infinity()};
    double min_abs_wall_distance_m{std::numeric_limits<double>::infinity()};
    int lambda_flip_count{0};
    int yank_count{0};
    double formation_in_view_fraction{1.0};
    double asv_path_length_m{0.0};
    double auv_path_length_m{0.0};
};

inline RunMetrics compute_metrics(const SimOutcome& outcome, const RunSetup& setup) {
    RunMetrics m;
    m.status = outcome.status;
    if (outcome.status == SimStatus::TargetReached) m.time_to_target_s = outcome.final_time_s;
    long in_view = 0;
    bool prev_yank = false;
    const TraceRecord* prev = nullptr;
    for (const TraceRecord& rec : outcome.trace) {
        m.min_obstacle_clearance_m =
            std::min(m.min_obstacle_clearance_m,
                     obstacle_clearance(setup.world, rec.auv.position, setup.sim.auv_footprint_m));
        m.min_abs_wall_distance_m = std::min(m.min_abs_wall_distance_m, std::abs(rec.wall_distance_m));
        if (rec.asv_view.region != Region::OutOfView && rec.auv_view.region != Region::OutOfView) {
            ++in_view;
        }
        if (rec.yank_active && !prev_yank) ++m.yank_count;
        prev_yank = rec.yank_active;
        if (prev != nullptr) {
            if (rec.lambda != prev->lambda) ++m.lambda_flip_count;
            m.asv_path_length_m += (rec.asv.position - prev->asv.position).norm();
            m.auv_path_length_m += (rec.auv.position - prev->auv.position).norm();
        }
        prev = &rec;
    }
    if (!outcome.trace.empty()) {
        m.formation_in_view_fraction =
            static_cast<double>(in_view) / static_cast<double>(outcome.trace.size());
    }
    return m;
}

namespace scenarios {

// Shared defaults, chosen so the stall near a blocking obstacle settles into
// an exact force parity instead of a slow tug-of-war. The lateral push cap
// equals alpha, so everywhere inside the active range the push sits pinned
// at 0.4, the same value as the follower's cross-track tether clamp: when
// the tag is pressed to the deep side of the view the two cancel exactly and
// the stall is static at whatever depth it formed. A static stall is what
// lets the weighting window fill and fire. Along the track the brake cap is
// raised above the follower's 0.5 clamp, giving a two-sided standoff at
// alpha / 0.5 = 0.8 m: further out the tether out-pulls the brake and
// presses the follower in, closer in the brake wins and pushes it back.
// Each weighting firing then walks the pair sideways, hop by hop, until the
// obstacle clears the sonar cone. The leader's own tether clamp matches its
// planner cap at 0.4 so a pressed tag can stop the walk outright rather
// than lose a shoving match against the waypoint pull.
inline RunSetup default_setup() {
    RunSetup s;
    s.dt_s = 0.02;
    s.asv_dynamics = make_dynamics(s.dt_s, 0.5, {0.6, 0.6, 0.0, 0.0, 0.0, 1.5});
    s.auv_dynamics = make_dynamics(s.dt_s, 0.5, {0.6, 0.6, 0.3, 0.5, 0.5, 0.5});
    s.camera = CameraModel{640.0, 480.0, 800.0, 0.6, 0.0};
    s.asv_ibvs = IbvsConfig{0.012, 0.0008, 0.4, 0.4, CameraFacing::Down};
    s.auv_ibvs = IbvsConfig{0.024, 0.0008, 0.5, 0.4, CameraFacing::Up};
    s.sonar = SonarConfig{63.0 * kPi / 180.0, 3.0, 0.0};
    s.avoidance = AvoidanceConfig{0.40, 1.0, 0.56, 0.4};
    s.planner = PlannerConfig{{}, 1.5, 0.5, 0.2, 0.4, 0.5};
    s.depth_hold = DepthHoldConfig{-1.5, 1.0, 0.5, 1.0, 0.5};
    s.paradigm = ParadigmConfig{1.0, 0.2, 4.0, 1.0, 0.85, 1.0, 1.0, 0.5, 1.0, 1};
    s.sim = SimConfig{120.0, 0.30, 0.22, 5, 20.0, 0.05, 1};
    return s;
}

inline void set_course(RunSetup& s, const Tank& tank, const Vec2& start, const Vec2& target) {
    s.world.tank = tank;
    s.world.asv_start = start;
    s.world.asv_target = target;
    s.world.auv_start = start;
    s.world.auv_hold_depth_m = s.depth_hold.target_depth_m;
    s.planner.waypoints = {target};
}

inline const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {"case1", "case2", "case3", "obscured_tank"};
    return names;
}

/// Builds one of the builtin scenarios. Throws std::invalid_argument for an
/// unknown name.
inline ScenarioDef builtin(const std::string& name, Mode mode) {
    const Tank small_tank{5.0, 4.0, 2.5};
    ScenarioDef def;
    def.name = name + "_" + to_string(mode);
    def.setup = default_setup();
    def.setup.mode = mode;
    if (name == "case1") {
        // Small obstacle just right of the track, far enough out that the
        // follower clears its blind flank when the sonar cone loses it.
        set_course(def.setup, small_tank, {0.75, 2.0}, {4.25, 2.0});
        def.setup.world.obstacles = {{"A", CircleShape{{2.5, 1.35}, 0.3}}};
        def.expected_outcome = SimStatus::TargetReached;
    } else if (name == "case2") {
        // Large obstacle blocking the right side of the track. The left gap is
        // passable once the weighting releases the planner's grip.
        set_course(def.setup, small_tank, {0.75, 2.0}, {4.25, 2.0});
        def.setup.world.obstacles = {{"B", BoxShape{{2.2, 0.9}, {2.5, 2.5}}}};
        def.setup.sim.max_time_s = 240.0;
        def.expected_outcome =
            mode == Mode::DogWalking ? SimStatus::TargetReached : SimStatus::Stuck;
    } else if (name == "case3") {
        // Mirror of case2: the gap is on the right, so the initial left-side
        // preference squeezes the leader toward the left wall until a yank
        // flips the follower's side choice.
        set_course(def.setup, small_tank, {0.75, 2.0}, {4.25, 2.0});
        def.setup.world.obstacles = {{"B", BoxShape{{2.2, 1.5}, {2.5, 3.9}}}};
        def.setup.sim.max_time_s = 240.0;
        def.expected_outcome =
            mode == Mode::DogWalking ? SimStatus::TargetReached : SimStatus::Stuck;
    } else if (name == "obscured_tank") {
        // Long tank with alternating small and large obstacles (A..D).
        set_course(def.setup, Tank{10.0, 4.0, 2.5}, {0.75, 2.0}, {9.25, 2.0});
        def.setup.world.obstacles = {
            {"A", CircleShape{{2.0, 1.35}, 0.3}},
            {"B", BoxShape{{3.5, 1.6}, {3.8, 3.1}}},
            {"C", CircleShape{{5.6, 2.65}, 0.3}},
            {"D", BoxShape{{7.5, 0.9}, {7.8, 2.2}}},
        };
        def.setup.sim.max_time_s = 480.0;
        if (mode == Mode::DogWalking) def.expected_outcome = SimStatus::TargetReached;
    } else {
        throw std::invalid_argument("unknown builtin scenario: " + name);
    }
    return def;
}

/// Along-path coordinate (x) of each obstacle center, used to check that a run
/// traversed every obstacle region.
inline std::vector<double> obstacle_along_path_coords(const WorldModel& w) {
    std::vector<double> xs;
    for (const Obstacle& o : w.obstacles) {
        if (const auto* c = std::get_if<CircleShape>(&o.shape)) {
            xs.push_back(c->center.x);
        } else {
            const auto& b = std::get<BoxShape>(o.shape);
            xs.push_back((b.min.x + b.max.x) / 2.0);
        }
    }
    return xs;
}

}  // namespace scenarios
}  // namespace tethersim
