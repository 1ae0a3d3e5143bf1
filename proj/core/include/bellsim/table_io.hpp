#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellsim/bell.hpp"
#include "bellsim/runner.hpp"
#include "bellsim/sweep_config.hpp"
#include "bellsim/symptoms.hpp"

namespace bellsim {

class TableFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest decimal that round-trips (std::to_chars), "nan" for NaN. The same
/// double always produces the same text, on every platform.
std::string format_number(double value);

inline constexpr const char* kSweepCsvHeader =
    "phi,nn,ns,sn,ss,null_a,null_b,null_both,t,t_obs,c_hat,e_biased,singles_est,seed";

void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records);
/// Reads a table written by write_sweep_csv. config_hash is left 0. Throws
/// TableFormatError on a bad header, a malformed row, or a row whose seven
/// categories do not add up to t.
std::vector<SweepRecord> read_sweep_csv(std::istream& in);

std::string sweep_json(const SweepConfig& config, std::span<const SweepRecord> records);

void write_oracle_csv(std::ostream& out, std::span<const OracleRecord> records);
std::string oracle_json(const SweepConfig& config, std::span<const OracleRecord> records, int resolution);

/// `tallies` may be empty (oracle reports).
void write_bell_csv(std::ostream& out, std::span<const BellReport> reports);
std::string bell_json(const SweepConfig& config, std::span<const BellReport> reports,
                      std::span<const CoincidenceTally> tallies);

void write_symptom_csv(std::ostream& out, const SymptomReport& report);
std::string symptom_json(const SymptomReport& report);

}  // namespace bellsim
