#pragma once

#include <string_view>
#include <vector>

#include "bellsim/hv_space.hpp"
#include "bellsim/random_stream.hpp"

namespace bellsim {

/// Plus is the N record, Minus the S record, Null means nothing was seen.
enum class Outcome { Plus, Minus, Null };

std::string_view to_string(Outcome outcome) noexcept;

/// Orientation of one station. On the sphere a unit direction; on the circle
/// an analyser angle reduced mod pi (classification has period pi there).
class DetectorSetting {
public:
    /// Throws std::invalid_argument unless |direction| = 1 within 1e-12.
    static DetectorSetting sphere(Vec3 direction);
    /// Direction (cos angle, sin angle, 0) in the x-y plane.
    static DetectorSetting sphere_in_plane(double angle);
    static DetectorSetting circle(double analyser_angle);
    /// sphere_in_plane or circle depending on `space`.
    static DetectorSetting at(HvSpace space, double angle);

    [[nodiscard]] HvSpace space() const noexcept { return space_; }
    [[nodiscard]] Vec3 direction() const noexcept { return direction_; }
    [[nodiscard]] double angle() const noexcept { return angle_; }

private:
    DetectorSetting(HvSpace space, Vec3 direction, double angle) noexcept
        : space_(space), direction_(direction), angle_(angle) {}

    HvSpace space_;
    Vec3 direction_;
    double angle_;
};

/// Relative angle phi between two settings of the same space: [0, pi] on the
/// sphere, [0, pi/2] on the circle (after folding by the period pi).
double relative_angle(const DetectorSetting& a, const DetectorSetting& b);

/**
 * Geometric detection model of one station.
 *
 * Sphere (u = lambda . direction):
 *   - hard bands: Null for u in [0, sin band_plus) or u in (-sin band_minus, 0);
 *   - caps: Null for |u| > cos cap_half_angle;
 *   - fuzz: detection probability ramps linearly in u from 0 at sin(band) to
 *     1 at sin(band + fuzz_width) on each side.
 * Circle (theta = (lambda - analyser) mod pi, sector boundaries pi/4, 3pi/4):
 *   - arcs: Null within arc_half_angle of a boundary;
 *   - fuzz: linear ramp in boundary distance from arc to arc + fuzz_width.
 *
 * Band and cap parameters are ignored on the circle, arcs on the sphere.
 */
struct DetectionModel {
    double band_half_angle_plus = 0.0;
    double band_half_angle_minus = 0.0;
    double cap_half_angle = 0.0;
    double fuzz_width = 0.0;
    double arc_half_angle = 0.0;

    static DetectionModel ideal() noexcept { return {}; }
    static DetectionModel symmetric_band(double half_angle) noexcept {
        return {.band_half_angle_plus = half_angle, .band_half_angle_minus = half_angle};
    }
    static DetectionModel arcs(double half_angle) noexcept {
        return {.arc_half_angle = half_angle};
    }

    /// Throws std::invalid_argument on negative or out-of-range parameters.
    void validate() const;
    [[nodiscard]] bool is_ideal() const noexcept;

    friend bool operator==(const DetectionModel&, const DetectionModel&) = default;
};

/// Probabilities of the three outcomes at one point of the profile.
struct OutcomeProbabilities {
    double plus = 0.0;
    double minus = 0.0;
    double null = 0.0;
};

/// Deterministic outcome profile. `coordinate` is u in [-1, 1] on the sphere
/// and theta in [0, pi) on the circle. Piecewise linear between the points
/// returned by profile_breakpoints().
OutcomeProbabilities outcome_profile(const DetectionModel& model, HvSpace space,
                                     double coordinate) noexcept;

/// Sorted points where the profile is not linear, including the domain ends
/// (-1, 1 on the sphere; 0, pi on the circle).
std::vector<double> profile_breakpoints(const DetectionModel& model, HvSpace space);

/// The profile coordinate of `lambda` seen from `setting`.
double profile_coordinate(const DetectorSetting& setting, const HiddenVariable& lambda);

/// Classifies lambda at one station. Draws from `stream` only when the
/// detection probability lies strictly between 0 and 1. Throws
/// std::invalid_argument when the setting and lambda live in different spaces.
Outcome detect(const DetectionModel& model, const DetectorSetting& setting,
               const HiddenVariable& lambda, RandomStream& stream);

/// Exact probability of Null for uniform lambda.
double null_fraction(const DetectionModel& model, HvSpace space);

}  // namespace bellsim
