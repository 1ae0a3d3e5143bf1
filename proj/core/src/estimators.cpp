#include "bellsim/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bellsim {

namespace {

template <typename Counts>
auto category_value(const Counts& c, Category category) {
    switch (category) {
        case Category::NN: return c.nn;
        case Category::NS: return c.ns;
        case Category::SN: return c.sn;
        case Category::SS: return c.ss;
    }
    return c.nn;
}

double checked(double d) {
    if (!(d > 0.0)) {
        throw UndefinedEstimate("estimate undefined: numerator and denominator are both zero");
    }
    return d;
}

}  // namespace

std::string_view to_string(DenominatorMode mode) noexcept {
    switch (mode) {
        case DenominatorMode::EmittedT: return "emitted";
        case DenominatorMode::ObservedTobs: return "observed";
        case DenominatorMode::Singles: return "singles";
    }
    return "?";
}

DenominatorMode parse_mode(std::string_view text) {
    if (text == "emitted" || text == "EmittedT" || text == "T") return DenominatorMode::EmittedT;
    if (text == "observed" || text == "ObservedTobs" || text == "Tobs") return DenominatorMode::ObservedTobs;
    if (text == "singles" || text == "Singles") return DenominatorMode::Singles;
    throw std::invalid_argument("unknown denominator mode '" + std::string(text) +
                                "' (expected emitted, observed or singles)");
}

std::uint64_t t_obs(const CoincidenceTally& tally) noexcept { return tally.observed(); }

double denominator(const CoincidenceTally& t, DenominatorMode mode) noexcept {
    switch (mode) {
        case DenominatorMode::EmittedT: return static_cast<double>(t.emitted);
        case DenominatorMode::ObservedTobs: return static_cast<double>(t.observed());
        case DenominatorMode::Singles: {
            const auto singles_a = static_cast<double>(t.emitted - t.null_a_only - t.null_both);
            const auto singles_b = static_cast<double>(t.emitted - t.null_b_only - t.null_both);
            return std::sqrt(singles_a * singles_b);
        }
    }
    return 0.0;
}

double denominator(const CategoryProbabilities& p, DenominatorMode mode) noexcept {
    switch (mode) {
        case DenominatorMode::EmittedT: return p.total();
        case DenominatorMode::ObservedTobs: return p.observed();
        case DenominatorMode::Singles: {
            const double singles_a = p.total() - p.null_a_only - p.null_both;
            const double singles_b = p.total() - p.null_b_only - p.null_both;
            return std::sqrt(std::max(0.0, singles_a) * std::max(0.0, singles_b));
        }
    }
    return 0.0;
}

double correlation(const CoincidenceTally& t, DenominatorMode mode) {
    const double d = checked(denominator(t, mode));
    // Integer numerator keeps the ratio exact under common scaling of counts.
    const auto agree = static_cast<std::int64_t>(t.nn + t.ss);
    const auto disagree = static_cast<std::int64_t>(t.ns + t.sn);
    return static_cast<double>(agree - disagree) / d;
}

double correlation(const CategoryProbabilities& p, DenominatorMode mode) {
    const double d = checked(denominator(p, mode));
    return ((p.nn + p.ss) - (p.ns + p.sn)) / d;
}

double pair_probability(const CoincidenceTally& t, Category category, DenominatorMode mode) {
    const double d = checked(denominator(t, mode));
    return static_cast<double>(category_value(t, category)) / d;
}

double pair_probability(const CategoryProbabilities& p, Category category, DenominatorMode mode) {
    const double d = checked(denominator(p, mode));
    return category_value(p, category) / d;
}

double correlation_std_error(const CoincidenceTally& t, DenominatorMode mode) {
    const double d = checked(denominator(t, mode));
    if (mode == DenominatorMode::ObservedTobs) {
        const double e = correlation(t, mode);
        return std::sqrt(std::max(0.0, 1.0 - e * e) / d);
    }
    // Per-pair score X in {+1, -1, 0}; var(sum X) = T (E[X^2] - E[X]^2).
    const auto n = static_cast<double>(t.emitted);
    const double m1 = correlation(t, DenominatorMode::EmittedT);
    const double m2 = static_cast<double>(t.observed()) / n;
    return std::sqrt(std::max(0.0, n * (m2 - m1 * m1))) / d;
}

double pair_probability_std_error(const CoincidenceTally& t, Category category, DenominatorMode mode) {
    const double d = checked(denominator(t, mode));
    const double p = std::min(1.0, pair_probability(t, category, mode));
    return std::sqrt(p * (1.0 - p) / d);
}

}  // namespace bellsim
