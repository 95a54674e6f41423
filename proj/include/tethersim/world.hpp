#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tethersim/geometry.hpp"

namespace tethersim {

// Rectangular test tank. The footprint spans [0, length_x] x [0, width_y] in the
// world frame; the water column spans z in [-depth_z, 0] with the surface at z = 0.
struct Tank {
    double length_x_m{5.0};
    double width_y_m{4.0};
    double depth_z_m{2.5};
};

struct CircleShape {
    Vec2 center;
    double radius_m{0.0};
};

// Axis-aligned box, stored as min/max corners.
struct BoxShape {
    Vec2 min;
    Vec2 max;
};

// Obstacles are vertical prisms spanning the full water column, so a planar
// footprint is all the collision and sonar queries need.
struct Obstacle {
    std::string label;
    std::variant<CircleShape, BoxShape> shape;
};

struct WorldModel {
    Tank tank;
    std::vector<Obstacle> obstacles;
    Vec2 asv_start;
    Vec2 asv_target;
    Vec2 auv_start;
    double auv_hold_depth_m{-1.5};

    void validate() const;
};

namespace detail {

inline bool point_in_tank(const Tank& t, const Vec2& p) {
    return p.x >= 0.0 && p.x <= t.length_x_m && p.y >= 0.0 && p.y <= t.width_y_m;
}

// Distance from p to the solid shape (0 when p is inside it).
inline double distance_to_solid(const Vec2& p, const CircleShape& c) {
    return std::max(0.0, (p - c.center).norm() - c.radius_m);
}

inline double distance_to_solid(const Vec2& p, const BoxShape& b) {
    const double dx = std::max({b.min.x - p.x, 0.0, p.x - b.max.x});
    const double dy = std::max({b.min.y - p.y, 0.0, p.y - b.max.y});
    return std::hypot(dx, dy);
}

inline double distance_to_solid(const Vec2& p, const Obstacle& o) {
    return std::visit([&](const auto& s) { return distance_to_solid(p, s); }, o.shape);
}

// Smallest t >= 0 with |p + t*dir - center| = radius, if the ray hits the circle.
inline std::optional<double> ray_circle_hit(const Vec2& p, const Vec2& dir, const CircleShape& c) {
    const Vec2 rel = p - c.center;
    const double b = rel.dot(dir);
    const double disc = b * b - (rel.norm_sq() - c.radius_m * c.radius_m);
    if (disc < 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    const double t0 = -b - root;
    const double t1 = -b + root;
    if (t0 >= 0.0) return t0;
    if (t1 >= 0.0) return t1;
    return std::nullopt;
}

// Intersection parameter t >= 0 of ray p + t*dir with segment a--b, if any.
inline std::optional<double> ray_segment_hit(const Vec2& p, const Vec2& dir, const Vec2& a,
                                             const Vec2& b) {
    const Vec2 seg = b - a;
    const double denom = dir.x * seg.y - dir.y * seg.x;
    if (std::abs(denom) < 1e-15) return std::nullopt;  // parallel (grazing handled by endpoints)
    const Vec2 ap = a - p;
    const double t = (ap.x * seg.y - ap.y * seg.x) / denom;
    const double s = (ap.x * dir.y - ap.y * dir.x) / denom;
    if (t < 0.0 || s < -1e-12 || s > 1.0 + 1e-12) return std::nullopt;
    return t;
}

inline bool bearing_in_cone(const Vec2& from, double heading, double half_angle, const Vec2& to) {
    const Vec2 d = to - from;
    if (d.norm_sq() == 0.0) return true;
    return std::abs(wrap_angle(std::atan2(d.y, d.x) - heading)) <= half_angle + 1e-12;
}

// Nearest boundary point of a circle within the forward cone. The hit distance
// along a ray grows monotonically with angular deviation from the ray through
// the nearest (or, from inside, farthest) boundary point, so clamping those two
// bearings into the cone yields the constrained minimum.
inline std::optional<double> cone_distance(const Vec2& p, double heading, double half_angle,
                                           const CircleShape& c) {
    const Vec2 rel = c.center - p;
    const double center_bearing = std::atan2(rel.y, rel.x);
    std::optional<double> best;
    for (const double raw : {center_bearing, center_bearing + kPi}) {
        const double ang = heading + std::clamp(wrap_angle(raw - heading), -half_angle, half_angle);
        if (auto t = ray_circle_hit(p, heading_dir(ang), c)) {
            if (!best || *t < *best) best = *t;
        }
    }
    return best;
}

// Nearest boundary point of a box within the forward cone. The feasible part of
// each edge is a sub-segment, so the minimum lies at the perpendicular foot, an
// endpoint, or a cone-edge crossing.
inline std::optional<double> cone_distance(const Vec2& p, double heading, double half_angle,
                                           const BoxShape& b) {
    const Vec2 corners[4] = {{b.min.x, b.min.y}, {b.max.x, b.min.y}, {b.max.x, b.max.y},
                             {b.min.x, b.max.y}};
    std::optional<double> best;
    auto consider = [&](double d) {
        if (!best || d < *best) best = d;
    };
    for (int i = 0; i < 4; ++i) {
        const Vec2 a = corners[i];
        const Vec2 e = corners[(i + 1) % 4];
        const Vec2 seg = e - a;
        const double len_sq = seg.norm_sq();
        const double s = len_sq > 0.0 ? std::clamp((p - a).dot(seg) / len_sq, 0.0, 1.0) : 0.0;
        const Vec2 foot = a + seg * s;
        if (bearing_in_cone(p, heading, half_angle, foot)) consider((foot - p).norm());
        for (const Vec2& corner : {a, e}) {
            if (bearing_in_cone(p, heading, half_angle, corner)) consider((corner - p).norm());
        }
        for (const double edge : {-half_angle, half_angle}) {
            if (auto t = ray_segment_hit(p, heading_dir(heading + edge), a, e)) consider(*t);
        }
    }
    return best;
}

}  // namespace detail

inline void WorldModel::validate() const {
    if (!(tank.length_x_m > 0.0) || !(tank.width_y_m > 0.0) || !(tank.depth_z_m > 0.0)) {
        throw std::invalid_argument("tank dimensions must be positive");
    }
    if (!(auv_hold_depth_m > -tank.depth_z_m) || !(auv_hold_depth_m < 0.0)) {
        throw std::invalid_argument("auv hold depth must lie inside the water column");
    }
    for (const Vec2& p : {asv_start, asv_target, auv_start}) {
        if (!detail::point_in_tank(tank, p)) {
            throw std::invalid_argument("start/target positions must lie inside the tank");
        }
    }
    for (const Obstacle& o : obstacles) {
        if (const auto* c = std::get_if<CircleShape>(&o.shape)) {
            if (!(c->radius_m > 0.0)) throw std::invalid_argument("circle radius must be positive");
            if (!detail::point_in_tank(tank, {c->center.x - c->radius_m, c->center.y - c->radius_m}) ||
                !detail::point_in_tank(tank, {c->center.x + c->radius_m, c->center.y + c->radius_m})) {
                throw std::invalid_argument("obstacle must lie inside the tank");
            }
        } else {
            const auto& b = std::get<BoxShape>(o.shape);
            if (!(b.max.x > b.min.x) || !(b.max.y > b.min.y)) {
                throw std::invalid_argument("box must have positive extent");
            }
            if (!detail::point_in_tank(tank, b.min) || !detail::point_in_tank(tank, b.max)) {
                throw std::invalid_argument("obstacle must lie inside the tank");
            }
        }
    }
}

/// Smallest Euclidean distance from p to any obstacle boundary point that lies
/// inside the forward cone (heading +- cone_half_angle) and within max_range.
/// Tank walls are not sonar targets. Returns nullopt when nothing is in range.
inline std::optional<double> distance_to_nearest_obstacle(const WorldModel& w, const Vec2& p,
                                                          double heading, double cone_half_angle,
                                                          double max_range) {
    if (!(cone_half_angle > 0.0) || cone_half_angle > kPi / 2.0 + 1e-12) {
        throw std::invalid_argument("cone half angle must lie in (0, pi/2]");
    }
    if (!(max_range > 0.0)) throw std::invalid_argument("max range must be positive");
    std::optional<double> best;
    for (const Obstacle& o : w.obstacles) {
        const auto d = std::visit(
            [&](const auto& s) { return detail::cone_distance(p, heading, cone_half_angle, s); },
            o.shape);
        if (d && (!best || *d < *best)) best = d;
    }
    if (best && *best > max_range) return std::nullopt;
    return best;
}

/// Signed perpendicular distance to the nearest lateral tank wall: negative when
/// the nearest wall lies on the vehicle's left half-plane, positive on the right.
/// Walls dead ahead or astern (perpendicular foot on the heading axis) are not
/// lateral and are skipped. Ties resolve to the right wall (+).
inline double signed_wall_distance(const WorldModel& w, const Vec2& p, double heading) {
    if (!detail::point_in_tank(w.tank, p)) {
        throw std::invalid_argument("position must lie inside the tank");
    }
    const Vec2 left_axis = {-std::sin(heading), std::cos(heading)};
    double d_left = std::numeric_limits<double>::infinity();
    double d_right = std::numeric_limits<double>::infinity();
    const Vec2 feet[4] = {{0.0, p.y}, {w.tank.length_x_m, p.y}, {p.x, 0.0}, {p.x, w.tank.width_y_m}};
    for (const Vec2& foot : feet) {
        const double lateral = (foot - p).dot(left_axis);
        const double dist = (foot - p).norm();
        if (lateral > 1e-12) {
            d_left = std::min(d_left, dist);
        } else if (lateral < -1e-12) {
            d_right = std::min(d_right, dist);
        }
    }
    if (d_left < d_right - 1e-9) return -d_left;
    return d_right;
}

/// True when a disc of footprint_radius centered at p overlaps an obstacle or
/// pokes outside the tank footprint. Contact at exactly footprint_radius is
/// contact-free (strict inequalities).
inline bool collides(const WorldModel& w, const Vec2& p, double footprint_radius) {
    if (!(footprint_radius >= 0.0)) throw std::invalid_argument("footprint radius must be >= 0");
    if (p.x < footprint_radius || p.x > w.tank.length_x_m - footprint_radius ||
        p.y < footprint_radius || p.y > w.tank.width_y_m - footprint_radius) {
        return true;
    }
    for (const Obstacle& o : w.obstacles) {
        if (detail::distance_to_solid(p, o) < footprint_radius) return true;
    }
    return false;
}

/// Wall-only variant of collides() for the surface vehicle, which floats above
/// the submerged obstacle prisms and can only strike the tank walls.
inline bool outside_walls(const WorldModel& w, const Vec2& p, double footprint_radius) {
    return p.x < footprint_radius || p.x > w.tank.length_x_m - footprint_radius ||
           p.y < footprint_radius || p.y > w.tank.width_y_m - footprint_radius;
}

/// Distance from a disc to the nearest obstacle (not walls); +infinity when the
/// world has no obstacles. Negative values mean overlap.
inline double obstacle_clearance(const WorldModel& w, const Vec2& p, double footprint_radius) {
    double best = std::numeric_limits<double>::infinity();
    for (const Obstacle& o : w.obstacles) {
        best = std::min(best, detail::distance_to_solid(p, o) - footprint_radius);
    }
    return best;
}

}  // namespace tethersim
