#include "bellsim/symptoms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace bellsim {

std::string_view to_string(SymptomVerdict verdict) noexcept {
    switch (verdict) {
        case SymptomVerdict::HiddenVariableSymptom: return "hidden-variable symptom";
        case SymptomVerdict::ConstantTobs: return "constant T_obs";
        case SymptomVerdict::VariesElsewhere: return "T_obs varies elsewhere";
    }
    return "unknown";
}

SymptomReport analyze_symptoms(std::span<const SweepRecord> records, HvSpace space, double significance) {
    constexpr double kSlack = 1e-9;
    if (records.size() < 5) throw std::invalid_argument("symptom analysis needs at least 5 grid points");
    if (!(significance > 0.0 && significance < 1.0)) throw std::invalid_argument("significance must lie in (0, 1)");

    std::vector<double> phis;
    for (const SweepRecord& r : records) {
        if (r.tally.emitted == 0) throw std::invalid_argument("symptom analysis needs T > 0 at every grid point");
        phis.push_back(r.phi);
    }
    std::sort(phis.begin(), phis.end());
    if (phis.front() > kSlack || phis.back() < kPi / 2.0 - kSlack) {
        throw std::invalid_argument("symptom analysis needs grid points spanning [0, pi/2]");
    }

    SymptomReport report;
    report.points = records.size();
    report.significance = significance;
    report.expected_min_phi = space == HvSpace::Sphere ? kPi / 2.0 : kPi / 4.0;
    report.grid_step = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < phis.size(); ++i) {
        if (phis[i] - phis[i - 1] > kSlack) report.grid_step = std::min(report.grid_step, phis[i] - phis[i - 1]);
    }

    double observed = 0.0;
    double emitted = 0.0;
    report.min_fraction = std::numeric_limits<double>::infinity();
    report.max_fraction = -std::numeric_limits<double>::infinity();
    for (const SweepRecord& r : records) {
        const double fraction = static_cast<double>(r.tally.observed()) / static_cast<double>(r.tally.emitted);
        observed += static_cast<double>(r.tally.observed());
        emitted += static_cast<double>(r.tally.emitted);
        if (fraction < report.min_fraction) {
            report.min_fraction = fraction;
            report.min_phi = r.phi;
        }
        report.max_fraction = std::max(report.max_fraction, fraction);
    }

    // 2 x k contingency table: observed vs missing at each grid point.
    const double pooled = observed / emitted;
    report.degrees_of_freedom = static_cast<int>(records.size()) - 1;
    if (pooled > 0.0 && pooled < 1.0) {
        for (const SweepRecord& r : records) {
            const double t = static_cast<double>(r.tally.emitted);
            const double hit = static_cast<double>(r.tally.observed());
            const double expected_hit = t * pooled;
            const double expected_miss = t - expected_hit;
            report.chi_square += (hit - expected_hit) * (hit - expected_hit) / expected_hit +
                                 (hit - expected_hit) * (hit - expected_hit) / expected_miss;
        }
        const boost::math::chi_squared dist(report.degrees_of_freedom);
        report.p_value = boost::math::cdf(boost::math::complement(dist, report.chi_square));
    }

    report.constancy_rejected = report.p_value < significance;
    report.minimum_at_expected = std::abs(report.min_phi - report.expected_min_phi) <= report.grid_step + kSlack;
    if (!report.constancy_rejected) {
        report.verdict = SymptomVerdict::ConstantTobs;
    } else {
        report.verdict = report.minimum_at_expected ? SymptomVerdict::HiddenVariableSymptom
                                                    : SymptomVerdict::VariesElsewhere;
    }
    return report;
}

}  // namespace bellsim
