#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "bellsim/estimators.hpp"
#include "bellsim/experiment.hpp"

namespace bellsim {

enum class BellTest { Simple, Standard };

std::string_view to_string(BellTest test) noexcept;
BellTest parse_bell_test(std::string_view text);

/**
 * Evaluated Bell inequality.
 *
 * Simple:   statistic = p_NS(a,b) + p_NS(b,c) - p_NS(a,c), bound 0,
 *           violated when the statistic is negative.
 * Standard: statistic = C(a,b) - C(a,b') + C(a',b) + C(a',b'), bound 2,
 *           violated when |statistic| > 2.
 *
 * `discrepancy` is the signed distance past the bound (positive when the
 * statistic is outside). Reports built from tallies carry a standard error
 * and only flag a violation beyond a 3-sigma guard band; reports built from
 * exact probabilities compare directly.
 */
struct BellReport {
    BellTest test = BellTest::Standard;
    DenominatorMode mode = DenominatorMode::EmittedT;
    std::vector<double> terms;
    std::vector<double> term_errors;
    double statistic = 0.0;
    double bound = 0.0;
    double std_error = 0.0;
    bool exact = false;
    bool violated = false;
    double discrepancy = 0.0;
    bool non_canonical = false;  // Singles denominator
};

/// Guard band, in standard errors, for flagging violations from tallies.
inline constexpr double kViolationGuardSigma = 3.0;

/// Tolerance for exact (oracle) comparisons against the bound, absorbing
/// floating-point rounding only.
inline constexpr double kExactBoundTolerance = 1e-12;

BellReport simple_bell(const CoincidenceTally& ab, const CoincidenceTally& bc, const CoincidenceTally& ac,
                       DenominatorMode mode);
BellReport simple_bell(const CategoryProbabilities& ab, const CategoryProbabilities& bc,
                       const CategoryProbabilities& ac, DenominatorMode mode);

BellReport standard_bell(const CoincidenceTally& ab, const CoincidenceTally& ab_prime,
                         const CoincidenceTally& a_prime_b, const CoincidenceTally& a_prime_b_prime,
                         DenominatorMode mode);
BellReport standard_bell(const CategoryProbabilities& ab, const CategoryProbabilities& ab_prime,
                         const CategoryProbabilities& a_prime_b, const CategoryProbabilities& a_prime_b_prime,
                         DenominatorMode mode);

/// Settings a, a', b, b' commonly used in standard tests: (0, pi/2, pi/4,
/// 3pi/4) on the sphere and the halved set (0, pi/4, pi/8, 3pi/8) on the
/// circle.
struct CanonicalAngles {
    double a;
    double a_prime;
    double b;
    double b_prime;
};

CanonicalAngles canonical_angles(HvSpace space) noexcept;

/// The detector-setting pairs, in (station A angle, station B angle) form,
/// that make up a test. Standard: (a,b), (a,b'), (a',b), (a',b') from
/// angles = {a, a', b, b'}. Simple: (a,b), (b,c), (a,c) from {a, b, c}.
std::vector<std::array<double, 2>> bell_setting_pairs(BellTest test, std::span<const double> angles);

/// Everything needed to run a Bell test's sub-experiments.
struct BellSetup {
    BellTest test = BellTest::Standard;
    HvSpace space = HvSpace::Sphere;
    DetectionModel model_a;
    DetectionModel model_b;
    double smear = 0.0;
    std::vector<double> angles;  // {a, a', b, b'} or {a, b, c}
    std::uint64_t pairs = 1'000'000;
    std::uint64_t master_seed = 0;

    /// The sub-experiment configs, one per setting pair; run i is seeded with
    /// derive_seed(master_seed, i).
    [[nodiscard]] std::vector<SubexperimentConfig> subexperiments() const;
};

/// Runs every sub-experiment of `setup`.
std::vector<CoincidenceTally> run_bell_tallies(const BellSetup& setup, unsigned workers = 0);

/// Evaluates a test from tallies or exact probabilities (3 or 4 entries).
BellReport evaluate_bell(BellTest test, std::span<const CoincidenceTally> tallies, DenominatorMode mode);
BellReport evaluate_bell(BellTest test, std::span<const CategoryProbabilities> probabilities,
                         DenominatorMode mode);

}  // namespace bellsim
