#pragma once

#include <cmath>
#include <numbers>
#include <string_view>
#include <vector>

#include "bellsim/random_stream.hpp"

namespace bellsim {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Hidden-variable space: unit sphere (spin direction) or circle
/// (polarisation angle).
enum class HvSpace { Sphere, Circle };

std::string_view to_string(HvSpace space) noexcept;
/// Accepts "sphere" / "circle"; throws std::invalid_argument otherwise.
HvSpace parse_space(std::string_view text);

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) noexcept { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) noexcept { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator*(double s, Vec3 v) noexcept { return {s * v.x, s * v.y, s * v.z}; }
    friend constexpr bool operator==(Vec3, Vec3) noexcept = default;
};

constexpr double dot(Vec3 a, Vec3 b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) noexcept {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 v) noexcept { return std::sqrt(dot(v, v)); }

/// Angle between two vectors in [0, pi], accurate near 0 and pi.
double angle_between(Vec3 a, Vec3 b) noexcept;

/// Wraps an angle into [0, period).
double wrap_angle(double angle, double period) noexcept;

/// A point of the hidden-variable space: a unit 3-vector on the sphere, or an
/// angle in [0, 2pi) on the circle.
class HiddenVariable {
public:
    /// Throws std::invalid_argument unless |v| = 1 within 1e-12.
    static HiddenVariable on_sphere(Vec3 v);
    /// Any finite angle; reduced into [0, 2pi).
    static HiddenVariable on_circle(double angle);

    [[nodiscard]] HvSpace space() const noexcept { return space_; }
    [[nodiscard]] Vec3 direction() const noexcept { return direction_; }
    [[nodiscard]] double angle() const noexcept { return angle_; }

    friend bool operator==(const HiddenVariable&, const HiddenVariable&) = default;

private:
    HiddenVariable(HvSpace space, Vec3 direction, double angle) noexcept
        : space_(space), direction_(direction), angle_(angle) {}

    HvSpace space_;
    Vec3 direction_;
    double angle_;
};

/// Uniform sample. Sphere: z uniform on [-1, 1], azimuth uniform on [0, 2pi).
HiddenVariable sample_uniform(HvSpace space, RandomStream& stream);

struct WeightedNode {
    HiddenVariable point;
    double weight;
};

/// Product midpoint grid with weights summing to 1. Circle: `resolution`
/// nodes in angle. Sphere: resolution x resolution cells uniform in
/// (z, azimuth). Throws std::invalid_argument when resolution < 2.
std::vector<WeightedNode> quadrature_grid(HvSpace space, int resolution);

}  // namespace bellsim
