#pragma once

#include <algorithm>
#include <cmath>

namespace tethersim {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
    double x{0.0};
    double y{0.0};

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Normalizes an angle to (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a + kPi, 2.0 * kPi);
    if (a <= 0.0) a += 2.0 * kPi;
    return a - kPi;
}

/// Rotates a planar vector by angle (CCW positive).
inline Vec2 rotate(const Vec2& v, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

inline Vec2 heading_dir(double yaw) { return {std::cos(yaw), std::sin(yaw)}; }

/// Signum with sign(0) = 0.
inline double sgn(double v) { return (v > 0.0) - (v < 0.0); }

inline double clamp_abs(double v, double bound) { return std::clamp(v, -bound, bound); }

}  // namespace tethersim
