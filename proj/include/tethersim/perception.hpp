#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>

#include "tethersim/dynamics.hpp"
#include "tethersim/geometry.hpp"
#include "tethersim/world.hpp"

namespace tethersim {

enum class Region { Safe, Integration, OutOfView };

inline const char* to_string(Region r) {
    switch (r) {
        case Region::Safe: return "safe";
        case Region::Integration: return "integration";
        default: return "out_of_view";
    }
}

// Up: camera looks toward the surface (underwater vehicle). Down: camera looks
// toward the floor (surface vehicle). Both are mounted with image-up aligned to
// the body +x axis, so a target ahead appears above the image center.
enum class CameraFacing { Up, Down };

struct CameraModel {
    double width_px{640.0};
    double height_px{480.0};
    double focal_px{400.0};
    double safe_fraction{0.6};    // centered rectangle of this side fraction is the safe region
    double pixel_noise_std_px{0.0};

    double center_w() const { return width_px / 2.0; }
    double center_h() const { return height_px / 2.0; }

    void validate() const {
        if (!(width_px > 0.0) || !(height_px > 0.0) || !(focal_px > 0.0)) {
            throw std::invalid_argument("camera dimensions and focal length must be positive");
        }
        if (!(safe_fraction > 0.0) || !(safe_fraction < 1.0)) {
            throw std::invalid_argument("safe fraction must lie in (0, 1)");
        }
        if (pixel_noise_std_px < 0.0) throw std::invalid_argument("noise std must be >= 0");
    }
};

struct PixelCoord {
    double w{0.0};
    double h{0.0};
};

struct ImageObservation {
    double t_s{0.0};
    Region region{Region::OutOfView};
    std::optional<PixelCoord> pixel;  // present unless OutOfView
};

struct SonarConfig {
    double cone_half_angle_rad{kPi / 4.0};
    double max_range_m{3.0};
    double range_noise_std_m{0.0};
};

struct SonarReading {
    double t_s{0.0};
    std::optional<double> range_m;  // nullopt when nothing is in the cone and range
};

struct RelativeYawObservation {
    double t_s{0.0};
    double yaw_rad{0.0};  // leader yaw minus follower yaw, wrapped to (-pi, pi]
};

namespace detail {

// Zero-mean Gaussian truncated at +-3 sigma, so noise can never move a sample
// by more than three standard deviations.
inline double truncated_gaussian(std::mt19937& rng, double std_dev) {
    if (std_dev <= 0.0) return 0.0;
    std::normal_distribution<double> dist(0.0, std_dev);
    double v = dist(rng);
    return std::clamp(v, -3.0 * std_dev, 3.0 * std_dev);
}

}  // namespace detail

/// Classifies a pixel: inside the centered safe rectangle (boundary inclusive)
/// -> Safe; otherwise inside the image bounds -> Integration; else OutOfView.
inline Region classify_region(const PixelCoord& px, const CameraModel& cam) {
    const double half_w = cam.safe_fraction * cam.width_px / 2.0;
    const double half_h = cam.safe_fraction * cam.height_px / 2.0;
    if (std::abs(px.w - cam.center_w()) <= half_w && std::abs(px.h - cam.center_h()) <= half_h) {
        return Region::Safe;
    }
    if (px.w >= 0.0 && px.w <= cam.width_px && px.h >= 0.0 && px.h <= cam.height_px) {
        return Region::Integration;
    }
    return Region::OutOfView;
}

/// Projects the target's tag into the observer's image through an ideal pinhole
/// camera with a vertical optical axis. Image-up is the observer's body +x; a
/// down-facing camera sees lateral offsets mirrored relative to an up-facing one.
inline ImageObservation observe_tag(const RobotState& observer, const RobotState& target,
                                    const CameraModel& cam, CameraFacing facing, double t_s,
                                    std::mt19937* rng = nullptr) {
    const double dz = target.z_m - observer.z_m;
    const double h = facing == CameraFacing::Up ? dz : -dz;
    if (std::abs(h) < 1e-12) throw std::invalid_argument("zero vertical separation");

    ImageObservation obs;
    obs.t_s = t_s;
    if (h < 0.0) return obs;  // target is behind the camera plane

    const Vec2 body = rotate(target.position - observer.position, -observer.yaw_rad);
    const double scale = cam.focal_px / h;
    PixelCoord px;
    px.h = cam.center_h() - scale * body.x;
    px.w = facing == CameraFacing::Up ? cam.center_w() + scale * body.y
                                      : cam.center_w() - scale * body.y;
    if (rng != nullptr && cam.pixel_noise_std_px > 0.0) {
        px.w += detail::truncated_gaussian(*rng, cam.pixel_noise_std_px);
        px.h += detail::truncated_gaussian(*rng, cam.pixel_noise_std_px);
    }
    obs.region = classify_region(px, cam);
    if (obs.region != Region::OutOfView) obs.pixel = px;
    return obs;
}

/// Forward-cone sonar: nearest obstacle boundary distance within the cone.
inline SonarReading read_sonar(const RobotState& auv, const WorldModel& world,
                               const SonarConfig& cfg, double t_s, std::mt19937* rng = nullptr) {
    SonarReading reading;
    reading.t_s = t_s;
    auto d = distance_to_nearest_obstacle(world, auv.position, auv.yaw_rad,
                                          cfg.cone_half_angle_rad, cfg.max_range_m);
    if (d && rng != nullptr && cfg.range_noise_std_m > 0.0) {
        const double noisy = *d + detail::truncated_gaussian(*rng, cfg.range_noise_std_m);
        d = std::clamp(noisy, 1e-9, cfg.max_range_m);
    }
    reading.range_m = d;
    return reading;
}

/// Relative yaw of the leader as seen by the follower, wrapped to (-pi, pi].
inline RelativeYawObservation observe_relative_yaw(const RobotState& follower,
                                                   const RobotState& leader, double t_s) {
    return {t_s, wrap_angle(leader.yaw_rad - follower.yaw_rad)};
}

}  // namespace tethersim
