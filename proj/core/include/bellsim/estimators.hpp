#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>

#include "bellsim/experiment.hpp"

namespace bellsim {

/// Which count divides the coincidence numerator.
///   EmittedT     - emitted pairs T (unbiased)
///   ObservedTobs - observed coincidences nn + ns + sn + ss (what experiments use)
///   Singles      - geometric mean of the two stations' singles counts
///                  (non-canonical; no standard definition exists)
enum class DenominatorMode { EmittedT, ObservedTobs, Singles };

enum class Category { NN, NS, SN, SS };

std::string_view to_string(DenominatorMode mode) noexcept;
/// Accepts emitted|observed|singles (and the enumerator spellings).
DenominatorMode parse_mode(std::string_view text);

/// Raised when an estimate has a zero denominator.
class UndefinedEstimate : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Expected category frequencies of one sub-experiment (a tally divided by T
/// in the limit). Sums to 1.
struct CategoryProbabilities {
    double nn = 0.0;
    double ns = 0.0;
    double sn = 0.0;
    double ss = 0.0;
    double null_a_only = 0.0;
    double null_b_only = 0.0;
    double null_both = 0.0;

    [[nodiscard]] double observed() const noexcept { return nn + ns + sn + ss; }
    [[nodiscard]] double total() const noexcept {
        return nn + ns + sn + ss + null_a_only + null_b_only + null_both;
    }
};

std::uint64_t t_obs(const CoincidenceTally& tally) noexcept;

double denominator(const CoincidenceTally& tally, DenominatorMode mode) noexcept;
double denominator(const CategoryProbabilities& p, DenominatorMode mode) noexcept;

/// (nn + ss - ns - sn) / D. Throws UndefinedEstimate when D = 0.
double correlation(const CoincidenceTally& tally, DenominatorMode mode);
double correlation(const CategoryProbabilities& p, DenominatorMode mode);

/// count(category) / D. Throws UndefinedEstimate when D = 0.
double pair_probability(const CoincidenceTally& tally, Category category, DenominatorMode mode);
double pair_probability(const CategoryProbabilities& p, Category category, DenominatorMode mode);

/// Binomial/multinomial standard errors of the two estimators, treating the
/// denominator as fixed. Throw UndefinedEstimate when D = 0.
double correlation_std_error(const CoincidenceTally& tally, DenominatorMode mode);
double pair_probability_std_error(const CoincidenceTally& tally, Category category, DenominatorMode mode);

}  // namespace bellsim
