#pragma once

#include <cstdint>
#include <vector>

#include "bellsim/bell.hpp"
#include "bellsim/estimators.hpp"
#include "bellsim/experiment.hpp"
#include "bellsim/oracle.hpp"
#include "bellsim/sweep_config.hpp"

namespace bellsim {

/// One grid point of a sweep. Estimates are NaN when their denominator is 0.
struct SweepRecord {
    double phi = 0.0;
    CoincidenceTally tally;
    double c_hat = 0.0;        // EmittedT
    double e_biased = 0.0;     // ObservedTobs
    double singles_est = 0.0;  // Singles
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;

    [[nodiscard]] bool has_undefined_estimate() const noexcept;
};

SweepRecord make_record(double phi, const CoincidenceTally& tally, std::uint64_t seed, std::uint64_t config_hash);

/// Draws `pairs` categories from fixed probabilities; pair i uses
/// RandomStream(seed, i). Used for the quantum reference, which has no
/// hidden-variable model to simulate.
CoincidenceTally sample_tally(const CategoryProbabilities& p, std::uint64_t pairs, std::uint64_t seed);

/// Seed of grid point i: derive_seed(config.seed, i).
std::uint64_t point_seed(const SweepConfig& config, std::size_t index) noexcept;

/// One record per grid point, in grid order. Points run in parallel on
/// `workers` threads (0 = hardware concurrency); the output does not depend
/// on `workers`. Throws ConfigError for an invalid config.
std::vector<SweepRecord> run_sweep(const SweepConfig& config, unsigned workers = 0);

/// Exact expectation of a sweep: oracle probabilities per grid point.
struct OracleRecord {
    double phi = 0.0;
    CategoryProbabilities p;
    double c_hat = 0.0;
    double e_biased = 0.0;
    double singles_est = 0.0;
    double qm = 0.0;  // quantum correlation at phi, for comparison
};

std::vector<OracleRecord> oracle_sweep(const SweepConfig& config, int resolution = kDefaultOracleResolution);

/// Tallies of a Bell run and its report under each of the config's modes.
struct BellRun {
    BellSetup setup;
    std::vector<CoincidenceTally> tallies;
    std::vector<BellReport> reports;  // one per config.modes entry
};

/// Simulated Bell run (sampled from the quantum prediction for the Qm
/// reference). Undefined estimates propagate as UndefinedEstimate.
BellRun run_bell(const SweepConfig& config, unsigned workers = 0);

/// Oracle counterpart: one exact report per mode.
std::vector<BellReport> run_bell_oracle(const SweepConfig& config, int resolution = kDefaultOracleResolution);

}  // namespace bellsim
