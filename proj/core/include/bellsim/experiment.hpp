#pragma once

#include <cstdint>
#include <utility>

#include "bellsim/detector.hpp"
#include "bellsim/hv_space.hpp"
#include "bellsim/random_stream.hpp"

namespace bellsim {

/// Source of correlated pairs. smear_half_angle = 0 gives identical hidden
/// variables at both stations; otherwise lambda_B is uniform in the cap (or
/// interval) of that half-angle around lambda_A.
struct PairSource {
    HvSpace space = HvSpace::Sphere;
    double smear_half_angle = 0.0;

    /// Throws std::invalid_argument unless smear_half_angle is in [0, pi].
    void validate() const;
};

std::pair<HiddenVariable, HiddenVariable> emit_pair(const PairSource& source, RandomStream& stream);

/// Coincidence tally of one sub-experiment. Every emitted pair lands in
/// exactly one of the seven categories.
struct CoincidenceTally {
    std::uint64_t nn = 0;
    std::uint64_t ns = 0;
    std::uint64_t sn = 0;
    std::uint64_t ss = 0;
    std::uint64_t null_a_only = 0;
    std::uint64_t null_b_only = 0;
    std::uint64_t null_both = 0;
    std::uint64_t emitted = 0;  // T

    void record(Outcome a, Outcome b) noexcept;

    /// nn + ns + sn + ss
    [[nodiscard]] std::uint64_t observed() const noexcept { return nn + ns + sn + ss; }
    /// The seven categories add up to `emitted`.
    [[nodiscard]] bool consistent() const noexcept;

    friend bool operator==(const CoincidenceTally&, const CoincidenceTally&) = default;
};

/// Fieldwise sum. Throws std::overflow_error if any count would wrap.
CoincidenceTally merge(const CoincidenceTally& a, const CoincidenceTally& b);

struct SubexperimentConfig {
    DetectorSetting setting_a;
    DetectorSetting setting_b;
    double phi = 0.0;  // relative angle of the settings, kept for reporting
    DetectionModel model_a;
    DetectionModel model_b;
    PairSource source;
    std::uint64_t pairs = 0;  // T
    std::uint64_t seed = 0;

    /// Settings at angles 0 and phi (in-plane on the sphere).
    static SubexperimentConfig at_relative_angle(HvSpace space, double phi, const DetectionModel& model_a,
                                                 const DetectionModel& model_b, double smear,
                                                 std::uint64_t pairs, std::uint64_t seed);
    /// Settings at explicit angles a and b.
    static SubexperimentConfig at_angles(HvSpace space, double angle_a, double angle_b,
                                         const DetectionModel& model_a, const DetectionModel& model_b,
                                         double smear, std::uint64_t pairs, std::uint64_t seed);

    /// Throws std::invalid_argument on inconsistent spaces, a stale phi,
    /// invalid models or source, or pairs == 0.
    void validate() const;
};

/// Simulates pairs [first, last) of the sub-experiment. Pair i draws from
/// RandomStream(seed, i): substream 0 for the source, 1 for station A and 2
/// for station B, so any partition of the pair range merges to the same tally.
CoincidenceTally run_pairs(const SubexperimentConfig& config, std::uint64_t first, std::uint64_t last);

/// Simulates all pairs, split across `workers` threads (0 = hardware
/// concurrency). The result does not depend on `workers`.
CoincidenceTally run_subexperiment(const SubexperimentConfig& config, unsigned workers = 0);

}  // namespace bellsim
