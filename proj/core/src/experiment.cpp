#include "bellsim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace bellsim {

namespace {

constexpr std::uint64_t kSourceSubstream = 0;
constexpr std::uint64_t kStationASubstream = 1;
constexpr std::uint64_t kStationBSubstream = 2;

// Unit vector uniform in the cap of half-angle rho around `centre`.
Vec3 sample_cap(Vec3 centre, double rho, RandomStream& stream) {
    const double cos_theta = 1.0 - stream.uniform() * (1.0 - std::cos(rho));
    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    const double azimuth = kTwoPi * stream.uniform();

    // Orthonormal frame (e1, e2, centre).
    const Vec3 helper = std::abs(centre.z) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
    Vec3 e1 = cross(helper, centre);
    e1 = (1.0 / norm(e1)) * e1;
    const Vec3 e2 = cross(centre, e1);

    Vec3 v = cos_theta * centre + (sin_theta * std::cos(azimuth)) * e1 + (sin_theta * std::sin(azimuth)) * e2;
    return (1.0 / norm(v)) * v;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    if (a > std::numeric_limits<std::uint64_t>::max() - b) {
        throw std::overflow_error("coincidence tally count overflow");
    }
    return a + b;
}

}  // namespace

void PairSource::validate() const {
    if (!(smear_half_angle >= 0.0 && smear_half_angle <= kPi)) {
        throw std::invalid_argument("smear half-angle must lie in [0, pi]");
    }
}

std::pair<HiddenVariable, HiddenVariable> emit_pair(const PairSource& source, RandomStream& stream) {
    const HiddenVariable a = sample_uniform(source.space, stream);
    if (source.smear_half_angle == 0.0) return {a, a};
    if (source.space == HvSpace::Circle) {
        const double offset = source.smear_half_angle * (2.0 * stream.uniform() - 1.0);
        return {a, HiddenVariable::on_circle(a.angle() + offset)};
    }
    return {a, HiddenVariable::on_sphere(sample_cap(a.direction(), source.smear_half_angle, stream))};
}

void CoincidenceTally::record(Outcome a, Outcome b) noexcept {
    ++emitted;
    if (a == Outcome::Null) {
        ++(b == Outcome::Null ? null_both : null_a_only);
    } else if (b == Outcome::Null) {
        ++null_b_only;
    } else if (a == Outcome::Plus) {
        ++(b == Outcome::Plus ? nn : ns);
    } else {
        ++(b == Outcome::Plus ? sn : ss);
    }
}

bool CoincidenceTally::consistent() const noexcept {
    return nn + ns + sn + ss + null_a_only + null_b_only + null_both == emitted;
}

CoincidenceTally merge(const CoincidenceTally& a, const CoincidenceTally& b) {
    return {checked_add(a.nn, b.nn),
            checked_add(a.ns, b.ns),
            checked_add(a.sn, b.sn),
            checked_add(a.ss, b.ss),
            checked_add(a.null_a_only, b.null_a_only),
            checked_add(a.null_b_only, b.null_b_only),
            checked_add(a.null_both, b.null_both),
            checked_add(a.emitted, b.emitted)};
}

SubexperimentConfig SubexperimentConfig::at_angles(HvSpace space, double angle_a, double angle_b,
                                                   const DetectionModel& model_a, const DetectionModel& model_b,
                                                   double smear, std::uint64_t pairs, std::uint64_t seed) {
    const DetectorSetting a = DetectorSetting::at(space, angle_a);
    const DetectorSetting b = DetectorSetting::at(space, angle_b);
    return {a, b, relative_angle(a, b), model_a, model_b, PairSource{space, smear}, pairs, seed};
}

SubexperimentConfig SubexperimentConfig::at_relative_angle(HvSpace space, double phi,
                                                           const DetectionModel& model_a,
                                                           const DetectionModel& model_b, double smear,
                                                           std::uint64_t pairs, std::uint64_t seed) {
    return at_angles(space, 0.0, phi, model_a, model_b, smear, pairs, seed);
}

void SubexperimentConfig::validate() const {
    if (setting_a.space() != setting_b.space() || setting_a.space() != source.space) {
        throw std::invalid_argument("settings and source must share one hidden-variable space");
    }
    if (std::abs(relative_angle(setting_a, setting_b) - phi) > 1e-12) {
        throw std::invalid_argument("phi does not match the angle between the settings");
    }
    if (pairs == 0) throw std::invalid_argument("a sub-experiment needs at least one pair");
    model_a.validate();
    model_b.validate();
    source.validate();
}

CoincidenceTally run_pairs(const SubexperimentConfig& config, std::uint64_t first, std::uint64_t last) {
    CoincidenceTally tally;
    for (std::uint64_t i = first; i < last; ++i) {
        RandomStream source_stream(config.seed, i, kSourceSubstream);
        const auto [lambda_a, lambda_b] = emit_pair(config.source, source_stream);
        RandomStream stream_a = source_stream.substream(kStationASubstream);
        RandomStream stream_b = source_stream.substream(kStationBSubstream);
        tally.record(detect(config.model_a, config.setting_a, lambda_a, stream_a),
                     detect(config.model_b, config.setting_b, lambda_b, stream_b));
    }
    return tally;
}

CoincidenceTally run_subexperiment(const SubexperimentConfig& config, unsigned workers) {
    config.validate();
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t chunks = std::min<std::uint64_t>(workers, config.pairs);
    if (chunks <= 1) return run_pairs(config, 0, config.pairs);

    std::vector<CoincidenceTally> partial(chunks);
    std::vector<std::jthread> threads;
    threads.reserve(chunks);
    for (std::uint64_t c = 0; c < chunks; ++c) {
        const std::uint64_t first = config.pairs * c / chunks;
        const std::uint64_t last = config.pairs * (c + 1) / chunks;
        threads.emplace_back([&config, &partial, c, first, last] { partial[c] = run_pairs(config, first, last); });
    }
    threads.clear();

    CoincidenceTally total;
    for (const auto& t : partial) total = merge(total, t);
    return total;
}

}  // namespace bellsim
