#include "bellsim/bell.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bellsim {

namespace {

void finish(BellReport& report) {
    if (report.test == BellTest::Simple) {
        report.bound = 0.0;
        report.discrepancy = report.bound - report.statistic;
    } else {
        report.bound = 2.0;
        report.discrepancy = std::abs(report.statistic) - report.bound;
    }
    const double guard = report.exact ? kExactBoundTolerance : kViolationGuardSigma * report.std_error;
    report.violated = report.discrepancy > guard;
    report.non_canonical = report.mode == DenominatorMode::Singles;
}

constexpr std::array<double, 4> kStandardSigns{+1.0, -1.0, +1.0, +1.0};
constexpr std::array<double, 3> kSimpleSigns{+1.0, +1.0, -1.0};

void require_count(BellTest test, std::size_t n) {
    const std::size_t expected = test == BellTest::Simple ? 3 : 4;
    if (n != expected) {
        throw std::invalid_argument(std::string(to_string(test)) + " Bell test needs " +
                                    std::to_string(expected) + " sub-experiments");
    }
}

}  // namespace

std::string_view to_string(BellTest test) noexcept {
    return test == BellTest::Simple ? "simple" : "standard";
}

BellTest parse_bell_test(std::string_view text) {
    if (text == "simple") return BellTest::Simple;
    if (text == "standard") return BellTest::Standard;
    throw std::invalid_argument("unknown Bell test '" + std::string(text) + "' (expected simple or standard)");
}

BellReport evaluate_bell(BellTest test, std::span<const CoincidenceTally> tallies, DenominatorMode mode) {
    require_count(test, tallies.size());
    BellReport report{.test = test, .mode = mode};
    double variance = 0.0;
    for (std::size_t i = 0; i < tallies.size(); ++i) {
        double term = 0.0;
        double error = 0.0;
        if (test == BellTest::Simple) {
            term = pair_probability(tallies[i], Category::NS, mode);
            error = pair_probability_std_error(tallies[i], Category::NS, mode);
            report.statistic += kSimpleSigns[i] * term;
        } else {
            term = correlation(tallies[i], mode);
            error = correlation_std_error(tallies[i], mode);
            report.statistic += kStandardSigns[i] * term;
        }
        report.terms.push_back(term);
        report.term_errors.push_back(error);
        variance += error * error;
    }
    report.std_error = std::sqrt(variance);
    finish(report);
    return report;
}

BellReport evaluate_bell(BellTest test, std::span<const CategoryProbabilities> probabilities,
                         DenominatorMode mode) {
    require_count(test, probabilities.size());
    BellReport report{.test = test, .mode = mode, .exact = true};
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        const double term = test == BellTest::Simple ? pair_probability(probabilities[i], Category::NS, mode)
                                                     : correlation(probabilities[i], mode);
        report.statistic += (test == BellTest::Simple ? kSimpleSigns[i] : kStandardSigns[i]) * term;
        report.terms.push_back(term);
        report.term_errors.push_back(0.0);
    }
    finish(report);
    return report;
}

BellReport simple_bell(const CoincidenceTally& ab, const CoincidenceTally& bc, const CoincidenceTally& ac,
                       DenominatorMode mode) {
    const std::array tallies{ab, bc, ac};
    return evaluate_bell(BellTest::Simple, std::span<const CoincidenceTally>(tallies), mode);
}

BellReport simple_bell(const CategoryProbabilities& ab, const CategoryProbabilities& bc,
                       const CategoryProbabilities& ac, DenominatorMode mode) {
    const std::array probabilities{ab, bc, ac};
    return evaluate_bell(BellTest::Simple, std::span<const CategoryProbabilities>(probabilities), mode);
}

BellReport standard_bell(const CoincidenceTally& ab, const CoincidenceTally& ab_prime,
                         const CoincidenceTally& a_prime_b, const CoincidenceTally& a_prime_b_prime,
                         DenominatorMode mode) {
    const std::array tallies{ab, ab_prime, a_prime_b, a_prime_b_prime};
    return evaluate_bell(BellTest::Standard, std::span<const CoincidenceTally>(tallies), mode);
}

BellReport standard_bell(const CategoryProbabilities& ab, const CategoryProbabilities& ab_prime,
                         const CategoryProbabilities& a_prime_b, const CategoryProbabilities& a_prime_b_prime,
                         DenominatorMode mode) {
    const std::array probabilities{ab, ab_prime, a_prime_b, a_prime_b_prime};
    return evaluate_bell(BellTest::Standard, std::span<const CategoryProbabilities>(probabilities), mode);
}

CanonicalAngles canonical_angles(HvSpace space) noexcept {
    if (space == HvSpace::Sphere) return {0.0, kPi / 2.0, kPi / 4.0, 3.0 * kPi / 4.0};
    return {0.0, kPi / 4.0, kPi / 8.0, 3.0 * kPi / 8.0};
}

std::vector<std::array<double, 2>> bell_setting_pairs(BellTest test, std::span<const double> angles) {
    if (test == BellTest::Simple) {
        if (angles.size() != 3) throw std::invalid_argument("simple Bell test needs angles a, b, c");
        return {{angles[0], angles[1]}, {angles[1], angles[2]}, {angles[0], angles[2]}};
    }
    if (angles.size() != 4) throw std::invalid_argument("standard Bell test needs angles a, a', b, b'");
    const double a = angles[0], a_prime = angles[1], b = angles[2], b_prime = angles[3];
    return {{a, b}, {a, b_prime}, {a_prime, b}, {a_prime, b_prime}};
}

std::vector<SubexperimentConfig> BellSetup::subexperiments() const {
    std::vector<SubexperimentConfig> configs;
    std::uint64_t run = 0;
    for (const auto& [angle_a, angle_b] : bell_setting_pairs(test, angles)) {
        configs.push_back(SubexperimentConfig::at_angles(space, angle_a, angle_b, model_a, model_b, smear, pairs,
                                                         derive_seed(master_seed, run++)));
    }
    return configs;
}

std::vector<CoincidenceTally> run_bell_tallies(const BellSetup& setup, unsigned workers) {
    std::vector<CoincidenceTally> tallies;
    for (const auto& config : setup.subexperiments()) tallies.push_back(run_subexperiment(config, workers));
    return tallies;
}

}  // namespace bellsim
