#include "bellsim/hv_space.hpp"

#include <stdexcept>
#include <string>

namespace bellsim {

std::string_view to_string(HvSpace space) noexcept {
    return space == HvSpace::Sphere ? "sphere" : "circle";
}

HvSpace parse_space(std::string_view text) {
    if (text == "sphere") return HvSpace::Sphere;
    if (text == "circle") return HvSpace::Circle;
    throw std::invalid_argument("unknown hidden-variable space '" + std::string(text) +
                                "' (expected sphere or circle)");
}

double angle_between(Vec3 a, Vec3 b) noexcept {
    return std::atan2(norm(cross(a, b)), dot(a, b));
}

double wrap_angle(double angle, double period) noexcept {
    double r = std::fmod(angle, period);
    if (r < 0.0) r += period;
    // fmod of a tiny negative value can round up to exactly `period`
    return r >= period ? 0.0 : r;
}

HiddenVariable HiddenVariable::on_sphere(Vec3 v) {
    if (!(std::abs(norm(v) - 1.0) <= 1e-12)) {
        throw std::invalid_argument("sphere hidden variable must be a unit vector");
    }
    return HiddenVariable(HvSpace::Sphere, v, 0.0);
}

HiddenVariable HiddenVariable::on_circle(double angle) {
    if (!std::isfinite(angle)) throw std::invalid_argument("circle hidden variable must be finite");
    return HiddenVariable(HvSpace::Circle, Vec3{}, wrap_angle(angle, kTwoPi));
}

HiddenVariable sample_uniform(HvSpace space, RandomStream& stream) {
    if (space == HvSpace::Circle) {
        return HiddenVariable::on_circle(kTwoPi * stream.uniform());
    }
    const double z = 2.0 * stream.uniform() - 1.0;
    const double azimuth = kTwoPi * stream.uniform();
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    return HiddenVariable::on_sphere({rho * std::cos(azimuth), rho * std::sin(azimuth), z});
}

std::vector<WeightedNode> quadrature_grid(HvSpace space, int resolution) {
    if (resolution < 2) throw std::invalid_argument("quadrature resolution must be >= 2");
    const auto n = static_cast<std::size_t>(resolution);
    std::vector<WeightedNode> nodes;
    if (space == HvSpace::Circle) {
        nodes.reserve(n);
        const double w = 1.0 / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            nodes.push_back({HiddenVariable::on_circle(kTwoPi * (static_cast<double>(k) + 0.5) * w), w});
        }
        return nodes;
    }
    nodes.reserve(n * n);
    const double w = 1.0 / static_cast<double>(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = -1.0 + 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        const double rho = std::sqrt(1.0 - z * z);
        for (std::size_t j = 0; j < n; ++j) {
            const double azimuth = kTwoPi * (static_cast<double>(j) + 0.5) / static_cast<double>(n);
            nodes.push_back({HiddenVariable::on_sphere({rho * std::cos(azimuth), rho * std::sin(azimuth), z}), w});
        }
    }
    return nodes;
}

}  // namespace bellsim
