#include "bellsim/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bellsim {

namespace {

constexpr double kQuarterPi = kPi / 4.0;
constexpr double kHalfPi = kPi / 2.0;

// Detection probability on a ramp that is 0 below `inner`, 1 above `outer`.
double ramp(double x, double inner, double outer) noexcept {
    if (x < inner) return 0.0;
    if (x >= outer) return 1.0;
    return (x - inner) / (outer - inner);
}

OutcomeProbabilities sphere_profile(const DetectionModel& m, double u) noexcept {
    if (m.cap_half_angle > 0.0 && std::abs(u) > std::cos(m.cap_half_angle)) {
        return {0.0, 0.0, 1.0};
    }
    if (u >= 0.0) {
        const double d = ramp(u, std::sin(m.band_half_angle_plus),
                              std::sin(m.band_half_angle_plus + m.fuzz_width));
        return {d, 0.0, 1.0 - d};
    }
    const double d = ramp(-u, std::sin(m.band_half_angle_minus),
                          std::sin(m.band_half_angle_minus + m.fuzz_width));
    return {0.0, d, 1.0 - d};
}

OutcomeProbabilities circle_profile(const DetectionModel& m, double theta) noexcept {
    const bool plus = theta < kQuarterPi || theta >= 3.0 * kQuarterPi;
    const double distance = std::min(std::abs(theta - kQuarterPi), std::abs(theta - 3.0 * kQuarterPi));
    double d = 0.0;
    if (m.fuzz_width > 0.0) {
        d = ramp(distance, m.arc_half_angle, m.arc_half_angle + m.fuzz_width);
    } else {
        d = distance < m.arc_half_angle ? 0.0 : 1.0;
    }
    return plus ? OutcomeProbabilities{d, 0.0, 1.0 - d} : OutcomeProbabilities{0.0, d, 1.0 - d};
}

void require(bool condition, const char* message) {
    if (!condition) throw std::invalid_argument(message);
}

}  // namespace

std::string_view to_string(Outcome outcome) noexcept {
    switch (outcome) {
        case Outcome::Plus: return "N";
        case Outcome::Minus: return "S";
        case Outcome::Null: return "null";
    }
    return "?";
}

DetectorSetting DetectorSetting::sphere(Vec3 direction) {
    require(std::abs(norm(direction) - 1.0) <= 1e-12, "sphere detector direction must be a unit vector");
    return DetectorSetting(HvSpace::Sphere, direction, std::atan2(direction.y, direction.x));
}

DetectorSetting DetectorSetting::sphere_in_plane(double angle) {
    return DetectorSetting(HvSpace::Sphere, {std::cos(angle), std::sin(angle), 0.0}, angle);
}

DetectorSetting DetectorSetting::circle(double analyser_angle) {
    require(std::isfinite(analyser_angle), "analyser angle must be finite");
    return DetectorSetting(HvSpace::Circle, Vec3{}, wrap_angle(analyser_angle, kPi));
}

DetectorSetting DetectorSetting::at(HvSpace space, double angle) {
    return space == HvSpace::Sphere ? sphere_in_plane(angle) : circle(angle);
}

double relative_angle(const DetectorSetting& a, const DetectorSetting& b) {
    require(a.space() == b.space(), "detector settings belong to different spaces");
    if (a.space() == HvSpace::Sphere) return angle_between(a.direction(), b.direction());
    const double d = wrap_angle(b.angle() - a.angle(), kPi);
    return std::min(d, kPi - d);
}

void DetectionModel::validate() const {
    for (double v : {band_half_angle_plus, band_half_angle_minus, cap_half_angle, fuzz_width, arc_half_angle}) {
        require(std::isfinite(v) && v >= 0.0, "detection model parameters must be finite and >= 0");
    }
    require(band_half_angle_plus + fuzz_width < kHalfPi, "band_half_angle_plus + fuzz_width must be < pi/2");
    require(band_half_angle_minus + fuzz_width < kHalfPi, "band_half_angle_minus + fuzz_width must be < pi/2");
    require(cap_half_angle < kHalfPi, "cap_half_angle must be < pi/2");
    require(arc_half_angle < kQuarterPi, "arc_half_angle must be < pi/4");
}

bool DetectionModel::is_ideal() const noexcept {
    return band_half_angle_plus == 0.0 && band_half_angle_minus == 0.0 && cap_half_angle == 0.0 &&
           fuzz_width == 0.0 && arc_half_angle == 0.0;
}

OutcomeProbabilities outcome_profile(const DetectionModel& model, HvSpace space, double coordinate) noexcept {
    return space == HvSpace::Sphere ? sphere_profile(model, coordinate) : circle_profile(model, coordinate);
}

std::vector<double> profile_breakpoints(const DetectionModel& m, HvSpace space) {
    std::vector<double> points;
    double lo = 0.0;
    double hi = kPi;
    if (space == HvSpace::Sphere) {
        lo = -1.0;
        hi = 1.0;
        points = {-1.0, 0.0, 1.0, std::sin(m.band_half_angle_plus), -std::sin(m.band_half_angle_minus)};
        if (m.fuzz_width > 0.0) {
            points.push_back(std::sin(m.band_half_angle_plus + m.fuzz_width));
            points.push_back(-std::sin(m.band_half_angle_minus + m.fuzz_width));
        }
        if (m.cap_half_angle > 0.0) {
            points.push_back(std::cos(m.cap_half_angle));
            points.push_back(-std::cos(m.cap_half_angle));
        }
    } else {
        points = {0.0, kPi};
        for (double boundary : {kQuarterPi, 3.0 * kQuarterPi}) {
            for (double offset : {0.0, m.arc_half_angle, m.arc_half_angle + m.fuzz_width}) {
                points.push_back(boundary - offset);
                points.push_back(boundary + offset);
            }
        }
    }
    std::erase_if(points, [&](double p) { return p < lo || p > hi; });
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
}

double profile_coordinate(const DetectorSetting& setting, const HiddenVariable& lambda) {
    require(setting.space() == lambda.space(), "detector setting and hidden variable belong to different spaces");
    if (setting.space() == HvSpace::Sphere) {
        return std::clamp(dot(lambda.direction(), setting.direction()), -1.0, 1.0);
    }
    return wrap_angle(lambda.angle() - setting.angle(), kPi);
}

Outcome detect(const DetectionModel& model, const DetectorSetting& setting, const HiddenVariable& lambda,
               RandomStream& stream) {
    const double coordinate = profile_coordinate(setting, lambda);
    const OutcomeProbabilities p = outcome_profile(model, setting.space(), coordinate);
    const Outcome candidate = p.plus > 0.0 ? Outcome::Plus : Outcome::Minus;
    if (p.null <= 0.0) return candidate;
    if (p.null >= 1.0) return Outcome::Null;
    return stream.uniform() < p.null ? Outcome::Null : candidate;
}

double null_fraction(const DetectionModel& model, HvSpace space) {
    // The profile is linear between breakpoints, so the midpoint rule per
    // segment is exact.
    const std::vector<double> points = profile_breakpoints(model, space);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double mid = 0.5 * (points[i] + points[i + 1]);
        total += (points[i + 1] - points[i]) * outcome_profile(model, space, mid).null;
    }
    return total / (space == HvSpace::Sphere ? 2.0 : kPi);
}

}  // namespace bellsim
