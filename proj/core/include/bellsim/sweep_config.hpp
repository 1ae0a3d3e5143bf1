#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bellsim/bell.hpp"
#include "bellsim/detector.hpp"
#include "bellsim/estimators.hpp"
#include "bellsim/hv_space.hpp"

namespace bellsim {

/// Invalid or unreadable configuration. The CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr int kSweepSchemaVersion = 1;

/// start, start + step, ... up to stop (inclusive, within 1e-9 of a step).
struct PhiGrid {
    double start = 0.0;
    double stop = kPi;
    double step = kPi / 16.0;

    [[nodiscard]] std::vector<double> points() const;
};

/// Lrm simulates the configured detection model. Qm samples tallies from the
/// quantum prediction cos(phi) with value-independent efficiency instead.
enum class Reference { Lrm, Qm };

std::string_view to_string(Reference reference) noexcept;

struct BellOptions {
    BellTest test = BellTest::Standard;
    std::vector<double> angles;  // empty: canonical angles of the space
};

struct SweepConfig {
    int schema_version = kSweepSchemaVersion;
    std::string name;
    HvSpace space = HvSpace::Sphere;
    DetectionModel model_a;
    DetectionModel model_b;
    double smear = 0.0;
    PhiGrid grid;
    std::uint64_t pairs = 1'000'000;
    std::uint64_t seed = 1;
    std::vector<DenominatorMode> modes{DenominatorMode::EmittedT, DenominatorMode::ObservedTobs,
                                       DenominatorMode::Singles};
    Reference reference = Reference::Lrm;
    double efficiency = 1.0;  // Qm reference only
    BellOptions bell;
    std::string csv_path;
    std::string json_path;

    /// Throws ConfigError when a field is out of range.
    void validate() const;

    /// The angles a Bell run uses: bell.angles, or the canonical set.
    [[nodiscard]] std::vector<double> bell_angles() const;
    [[nodiscard]] BellSetup bell_setup() const;

    /// Compact JSON with sorted keys. Output paths are left out so that the
    /// same experiment written to different files hashes the same.
    [[nodiscard]] std::string canonical_json() const;
    /// FNV-1a 64 of canonical_json().
    [[nodiscard]] std::uint64_t hash() const;
};

/**
 * Parses a JSON config document. Every key is optional except
 * schema_version; unknown keys are errors. Angles may be numbers or
 * expressions understood by parse_angle ("pi/8", "asin(0.2)").
 *
 *   {
 *     "schema_version": 1,
 *     "name": "fig10",
 *     "space": "sphere",
 *     "model_a": {"band_half_angle": "asin(0.2)"},
 *     "model_b": {"band_half_angle_plus": 0.1, "band_half_angle_minus": 0.3,
 *                 "cap_half_angle": 0, "fuzz_width": 0, "arc_half_angle": 0},
 *     "smear_half_angle": 0,
 *     "phi": {"start": 0, "stop": "pi", "step": "pi/16"},
 *     "pairs": 1000000,
 *     "seed": 10,
 *     "modes": ["emitted", "observed", "singles"],
 *     "reference": "lrm",
 *     "efficiency": 1,
 *     "bell": {"test": "standard", "angles": [0, "pi/2", "pi/4", "3pi/4"]},
 *     "output": {"csv": "fig10.csv", "json": "fig10.json"}
 *   }
 *
 * "band_half_angle" sets both sides. Keys that are present replace the
 * corresponding fields of `base`; everything else is kept. Throws
 * ConfigError.
 */
SweepConfig parse_sweep_config(std::string_view json_text, const SweepConfig& base = {});
SweepConfig load_sweep_config(const std::filesystem::path& path, const SweepConfig& base = {});

/// fig9 ... fig13 and aspect-pi15.
std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
SweepConfig preset(std::string_view name);

}  // namespace bellsim
