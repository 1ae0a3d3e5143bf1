#include "bellsim/runner.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace bellsim {

namespace {

double estimate_or_nan(auto&& estimate) {
    try {
        return estimate();
    } catch (const UndefinedEstimate&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

unsigned resolve_workers(unsigned workers, std::size_t jobs) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(jobs, 1)));
}

// Runs job(i) for i in [0, count) on a small pool; rethrows the first error.
template <typename Job>
void parallel_for(std::size_t count, unsigned workers, Job job) {
    workers = resolve_workers(workers, count);
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        job(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                    }
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

CategoryProbabilities reference_probabilities(const SweepConfig& config, double phi) {
    return qm_probabilities(config.space, phi, config.efficiency);
}

}  // namespace

bool SweepRecord::has_undefined_estimate() const noexcept {
    return std::isnan(c_hat) || std::isnan(e_biased) || std::isnan(singles_est);
}

SweepRecord make_record(double phi, const CoincidenceTally& tally, std::uint64_t seed, std::uint64_t config_hash) {
    SweepRecord r{.phi = phi, .tally = tally, .seed = seed, .config_hash = config_hash};
    r.c_hat = estimate_or_nan([&] { return correlation(tally, DenominatorMode::EmittedT); });
    r.e_biased = estimate_or_nan([&] { return correlation(tally, DenominatorMode::ObservedTobs); });
    r.singles_est = estimate_or_nan([&] { return correlation(tally, DenominatorMode::Singles); });
    return r;
}

CoincidenceTally sample_tally(const CategoryProbabilities& p, std::uint64_t pairs, std::uint64_t seed) {
    const std::array<double, 6> cumulative{p.nn,
                                           p.nn + p.ns,
                                           p.nn + p.ns + p.sn,
                                           p.nn + p.ns + p.sn + p.ss,
                                           p.nn + p.ns + p.sn + p.ss + p.null_a_only,
                                           p.nn + p.ns + p.sn + p.ss + p.null_a_only + p.null_b_only};
    CoincidenceTally tally;
    for (std::uint64_t i = 0; i < pairs; ++i) {
        const double u = RandomStream(seed, i).uniform() * p.total();
        std::size_t k = 0;
        while (k < cumulative.size() && u >= cumulative[k]) ++k;
        switch (k) {
            case 0: tally.record(Outcome::Plus, Outcome::Plus); break;
            case 1: tally.record(Outcome::Plus, Outcome::Minus); break;
            case 2: tally.record(Outcome::Minus, Outcome::Plus); break;
            case 3: tally.record(Outcome::Minus, Outcome::Minus); break;
            case 4: tally.record(Outcome::Null, Outcome::Plus); break;
            case 5: tally.record(Outcome::Plus, Outcome::Null); break;
            default: tally.record(Outcome::Null, Outcome::Null); break;
        }
    }
    return tally;
}

std::uint64_t point_seed(const SweepConfig& config, std::size_t index) noexcept {
    return derive_seed(config.seed, index);
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config, unsigned workers) {
    config.validate();
    const std::vector<double> phis = config.grid.points();
    const std::uint64_t hash = config.hash();
    std::vector<SweepRecord> records(phis.size());
    parallel_for(phis.size(), workers, [&](std::size_t i) {
        const std::uint64_t seed = point_seed(config, i);
        CoincidenceTally tally;
        if (config.reference == Reference::Qm) {
            tally = sample_tally(reference_probabilities(config, phis[i]), config.pairs, seed);
        } else {
            const auto sub = SubexperimentConfig::at_relative_angle(config.space, phis[i], config.model_a,
                                                                    config.model_b, config.smear, config.pairs, seed);
            tally = run_subexperiment(sub, 1);
        }
        records[i] = make_record(phis[i], tally, seed, hash);
    });
    return records;
}

std::vector<OracleRecord> oracle_sweep(const SweepConfig& config, int resolution) {
    config.validate();
    const std::vector<double> phis = config.grid.points();
    std::vector<OracleRecord> out(phis.size());
    parallel_for(phis.size(), 0, [&](std::size_t i) {
        OracleRecord r{.phi = phis[i]};
        r.p = config.reference == Reference::Qm
                  ? reference_probabilities(config, phis[i])
                  : banded_probabilities(config.space, phis[i], config.model_a, config.model_b, config.smear,
                                         resolution);
        r.c_hat = estimate_or_nan([&] { return correlation(r.p, DenominatorMode::EmittedT); });
        r.e_biased = estimate_or_nan([&] { return correlation(r.p, DenominatorMode::ObservedTobs); });
        r.singles_est = estimate_or_nan([&] { return correlation(r.p, DenominatorMode::Singles); });
        r.qm = qm_correlation(phis[i], config.space);
        out[i] = r;
    });
    return out;
}

BellRun run_bell(const SweepConfig& config, unsigned workers) {
    config.validate();
    BellRun run{.setup = config.bell_setup()};
    const auto subs = run.setup.subexperiments();
    run.tallies.resize(subs.size());
    parallel_for(subs.size(), workers, [&](std::size_t i) {
        if (config.reference == Reference::Qm) {
            run.tallies[i] = sample_tally(reference_probabilities(config, subs[i].phi), subs[i].pairs, subs[i].seed);
        } else {
            run.tallies[i] = run_subexperiment(subs[i], 1);
        }
    });
    for (DenominatorMode mode : config.modes) {
        run.reports.push_back(
            evaluate_bell(run.setup.test, std::span<const CoincidenceTally>(run.tallies), mode));
    }
    return run;
}

std::vector<BellReport> run_bell_oracle(const SweepConfig& config, int resolution) {
    config.validate();
    const BellSetup setup = config.bell_setup();
    std::vector<CategoryProbabilities> terms;
    for (const auto& sub : setup.subexperiments()) {
        terms.push_back(config.reference == Reference::Qm
                            ? reference_probabilities(config, sub.phi)
                            : banded_probabilities(config.space, sub.phi, config.model_a, config.model_b,
                                                   config.smear, resolution));
    }
    std::vector<BellReport> reports;
    for (DenominatorMode mode : config.modes) {
        reports.push_back(evaluate_bell(setup.test, std::span<const CategoryProbabilities>(terms), mode));
    }
    return reports;
}

}  // namespace bellsim
