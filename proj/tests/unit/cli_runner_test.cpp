#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "bellsim/angle_expr.hpp"
#include "bellsim/runner.hpp"
#include "bellsim/sweep_config.hpp"
#include "bellsim/symptoms.hpp"
#include "bellsim/table_io.hpp"

namespace bellsim {
namespace {

TEST(AngleExpr, Parses) {
    EXPECT_DOUBLE_EQ(parse_angle("0"), 0.0);
    EXPECT_DOUBLE_EQ(parse_angle("pi"), kPi);
    EXPECT_DOUBLE_EQ(parse_angle("pi/8"), kPi / 8);
    EXPECT_DOUBLE_EQ(parse_angle("3pi/4"), 3 * kPi / 4);
    EXPECT_DOUBLE_EQ(parse_angle("3*pi/4"), 3 * kPi / 4);
    EXPECT_DOUBLE_EQ(parse_angle("asin(0.2)"), std::asin(0.2));
    EXPECT_DOUBLE_EQ(parse_angle("-(pi - 1) / 2"), -(kPi - 1) / 2);
    EXPECT_DOUBLE_EQ(parse_angle("deg(45)"), kPi / 4);
    EXPECT_DOUBLE_EQ(parse_angle(" 1e-3 "), 1e-3);
    EXPECT_DOUBLE_EQ(parse_angle("2 * sqrt(2)"), 2 * std::sqrt(2.0));
}

TEST(AngleExpr, Errors) {
    for (const char* bad : {"", "pi/", "foo", "1/0", "asin(2)", "(1", "1)", "sin 1", "pi pi pi +"}) {
        EXPECT_THROW(parse_angle(bad), AngleParseError) << bad;
    }
}

TEST(PhiGrid, InclusiveEndpoints) {
    const PhiGrid grid{.start = 0.0, .stop = kPi, .step = kPi / 8};
    const auto points = grid.points();
    ASSERT_EQ(points.size(), 9u);
    EXPECT_EQ(points.front(), 0.0);
    EXPECT_EQ(points.back(), kPi);
    EXPECT_EQ(PhiGrid{}.points().size(), 17u);
}

TEST(SweepConfigParse, FullDocument) {
    const SweepConfig c = parse_sweep_config(R"json({
        "schema_version": 1, "name": "t", "space": "sphere",
        "model_a": {"band_half_angle": "asin(0.2)"},
        "model_b": {"band_half_angle_plus": 0.1, "cap_half_angle": "pi/10"},
        "smear_half_angle": "pi/16",
        "phi": {"start": 0, "stop": "pi/2", "step": "pi/8"},
        "pairs": 5000, "seed": 3, "modes": ["observed"],
        "bell": {"test": "simple", "angles": [0, "pi/4", "pi/2"]},
        "output": {"csv": "a.csv"}})json");
    EXPECT_DOUBLE_EQ(c.model_a.band_half_angle_plus, std::asin(0.2));
    EXPECT_DOUBLE_EQ(c.model_a.band_half_angle_minus, std::asin(0.2));
    EXPECT_DOUBLE_EQ(c.model_b.band_half_angle_plus, 0.1);
    EXPECT_EQ(c.model_b.band_half_angle_minus, 0.0);
    EXPECT_DOUBLE_EQ(c.model_b.cap_half_angle, kPi / 10);
    EXPECT_DOUBLE_EQ(c.smear, kPi / 16);
    EXPECT_EQ(c.grid.points().size(), 5u);
    EXPECT_EQ(c.pairs, 5000u);
    ASSERT_EQ(c.modes.size(), 1u);
    EXPECT_EQ(c.modes[0], DenominatorMode::ObservedTobs);
    EXPECT_EQ(c.bell.test, BellTest::Simple);
    EXPECT_EQ(c.bell_angles().size(), 3u);
    EXPECT_EQ(c.csv_path, "a.csv");
}

TEST(SweepConfigParse, Errors) {
    EXPECT_THROW(parse_sweep_config("{"), ConfigError);
    EXPECT_THROW(parse_sweep_config(R"({"name": "x"})"), ConfigError);
    EXPECT_THROW(parse_sweep_config(R"({"schema_version": 2})"), ConfigError);
    EXPECT_THROW(parse_sweep_config(R"({"schema_version": 1, "bogus": 1})"), ConfigError);
    EXPECT_THROW(parse_sweep_config(R"({"schema_version": 1, "model_a": {"width": 1}})"), ConfigError);
    EXPECT_THROW(parse_sweep_config(R"({"schema_version": 1, "pairs": 0})"), ConfigError);
    EXPECT_THROW(parse_sweep_config(R"({"schema_version": 1, "pairs": "many"})"), ConfigError);
    EXPECT_THROW(parse_sweep_config(R"({"schema_version": 1, "space": "torus"})"), ConfigError);
    EXPECT_THROW(parse_sweep_config(R"({"schema_version": 1, "phi": {"step": 0}})"), ConfigError);
    EXPECT_THROW(parse_sweep_config(R"({"schema_version": 1, "smear_half_angle": "pi/"})"), ConfigError);
    EXPECT_THROW(parse_sweep_config(R"({"schema_version": 1, "efficiency": 1.5})"), ConfigError);
    EXPECT_THROW(load_sweep_config("/nonexistent/bellsim.json"), ConfigError);
}

TEST(SweepConfigParse, KeysOverrideBase) {
    const SweepConfig base = preset("fig10");
    const SweepConfig c = parse_sweep_config(R"({"schema_version": 1, "seed": 99})", base);
    EXPECT_EQ(c.seed, 99u);
    EXPECT_EQ(c.model_a, base.model_a);
    EXPECT_EQ(c.pairs, base.pairs);
}

TEST(Presets, FilesMatchBuiltIns) {
    for (const std::string& name : preset_names()) {
        const SweepConfig file = load_sweep_config(std::string(BELLSIM_PRESET_DIR) + "/" + name + ".json");
        EXPECT_EQ(file.hash(), preset(name).hash()) << name;
        EXPECT_EQ(file.canonical_json(), preset(name).canonical_json()) << name;
    }
    EXPECT_THROW(preset("fig99"), ConfigError);
}

TEST(Presets, ParametersPerPreset) {
    EXPECT_TRUE(preset("fig9").model_a.is_ideal());
    EXPECT_NEAR(std::sin(preset("fig10").model_a.band_half_angle_plus), 0.2, 1e-15);
    EXPECT_NEAR(std::sin(preset("fig11").model_b.band_half_angle_minus), 0.5, 1e-15);
    EXPECT_DOUBLE_EQ(preset("fig12").smear, kPi / 4);
    EXPECT_EQ(preset("fig13").reference, Reference::Qm);
    EXPECT_DOUBLE_EQ(preset("fig13").efficiency, 0.8);
    const SweepConfig aspect = preset("aspect-pi15");
    EXPECT_EQ(aspect.space, HvSpace::Circle);
    EXPECT_DOUBLE_EQ(aspect.model_a.arc_half_angle, kPi / 15);
    EXPECT_TRUE(aspect.model_b.is_ideal());
}

TEST(SweepConfigHash, StableAndSensitive) {
    SweepConfig a = preset("fig10");
    SweepConfig b = preset("fig10");
    b.csv_path = "elsewhere.csv";
    EXPECT_EQ(a.hash(), b.hash());
    EXPECT_EQ(a.hash(), parse_sweep_config(a.canonical_json()).hash());
    b.seed += 1;
    EXPECT_NE(a.hash(), b.hash());
}

SweepConfig small(const std::string& name, std::uint64_t pairs = 100'000) {
    SweepConfig c = preset(name);
    c.pairs = pairs;
    c.grid.step = kPi / 8;
    return c;
}

TEST(RunSweep, DeterministicAndWorkerIndependent) {
    const SweepConfig c = small("fig10", 20'000);
    const auto one = run_sweep(c, 1);
    const auto three = run_sweep(c, 3);
    ASSERT_EQ(one.size(), 9u);
    for (std::size_t i = 0; i < one.size(); ++i) {
        EXPECT_EQ(one[i].tally, three[i].tally);
        EXPECT_EQ(one[i].seed, point_seed(c, i));
        EXPECT_EQ(one[i].config_hash, c.hash());
    }
    std::ostringstream x, y;
    write_sweep_csv(x, one);
    write_sweep_csv(y, run_sweep(c, 2));
    EXPECT_EQ(x.str(), y.str());
}

TEST(RunSweep, IdealMismatchShareIsLinear) {
    const SweepConfig c = small("fig9");
    for (const SweepRecord& r : run_sweep(c)) {
        const double n = static_cast<double>(r.tally.emitted);
        const double q = r.phi / kPi;
        EXPECT_NEAR(static_cast<double>(r.tally.ns + r.tally.sn) / n, q, 4 * std::sqrt(q * (1 - q) / n) + 1e-12);
        EXPECT_EQ(r.c_hat, r.e_biased);
    }
}

TEST(RunSweep, QuantumReferencePadsNulls) {
    const SweepConfig c = small("fig13");
    for (const SweepRecord& r : run_sweep(c)) {
        const double n = static_cast<double>(r.tally.emitted);
        const double nulls = static_cast<double>(r.tally.null_a_only + r.tally.null_b_only + r.tally.null_both) / n;
        EXPECT_NEAR(nulls, 0.36, 4 * std::sqrt(0.36 * 0.64 / n));
        EXPECT_NEAR(static_cast<double>(r.tally.null_a_only) / n, 0.16, 4 * std::sqrt(0.16 * 0.84 / n));
        EXPECT_NEAR(r.e_biased, std::cos(r.phi), 0.02);
    }
}

TEST(OracleSweep, MatchesClosedFormsForIdeal) {
    const SweepConfig c = small("fig9");
    for (const OracleRecord& r : oracle_sweep(c)) {
        EXPECT_NEAR(r.c_hat, 1 - 2 * r.phi / kPi, 1e-8);
        EXPECT_NEAR(r.qm, std::cos(r.phi), 1e-15);
    }
}

TEST(RunBell, ReportsPerModeAndOracleAgree) {
    SweepConfig c = preset("fig10");
    c.pairs = 200'000;
    const BellRun run = run_bell(c, 2);
    const auto exact = run_bell_oracle(c);
    ASSERT_EQ(run.reports.size(), c.modes.size());
    ASSERT_EQ(exact.size(), c.modes.size());
    EXPECT_EQ(run.tallies.size(), 4u);
    for (std::size_t i = 0; i < exact.size(); ++i) {
        EXPECT_NEAR(run.reports[i].statistic, exact[i].statistic, 4 * run.reports[i].std_error);
    }
}

SweepRecord record(double phi, std::uint64_t observed, std::uint64_t t) {
    CoincidenceTally tally{.nn = observed / 2, .ss = observed - observed / 2, .null_both = t - observed, .emitted = t};
    return make_record(phi, tally, 0, 0);
}

TEST(Symptoms, BandsShowDipAtRightAngle) {
    const auto records = run_sweep(small("fig10"));
    const SymptomReport r = analyze_symptoms(records, HvSpace::Sphere);
    EXPECT_TRUE(r.constancy_rejected);
    EXPECT_TRUE(r.minimum_at_expected);
    EXPECT_NEAR(r.min_phi, kPi / 2, 1e-12);
    EXPECT_EQ(r.verdict, SymptomVerdict::HiddenVariableSymptom);
    EXPECT_EQ(r.degrees_of_freedom, 8);
}

TEST(Symptoms, IdealAndOneSidedAreConstant) {
    const SymptomReport ideal = analyze_symptoms(run_sweep(small("fig9")), HvSpace::Sphere);
    EXPECT_EQ(ideal.verdict, SymptomVerdict::ConstantTobs);
    EXPECT_EQ(ideal.p_value, 1.0);

    SweepConfig one_sided = small("fig10");
    one_sided.model_b = DetectionModel::ideal();
    const SymptomReport r = analyze_symptoms(run_sweep(one_sided), HvSpace::Sphere);
    EXPECT_EQ(r.verdict, SymptomVerdict::ConstantTobs);
    EXPECT_FALSE(r.constancy_rejected);
    EXPECT_NEAR(r.min_fraction, 0.8, 0.01);
}

TEST(Symptoms, VariationElsewhere) {
    std::vector<SweepRecord> records;
    for (int i = 0; i <= 8; ++i) records.push_back(record(kPi * i / 8, i == 0 ? 5000 : 9000, 10000));
    const SymptomReport r = analyze_symptoms(records, HvSpace::Sphere);
    EXPECT_TRUE(r.constancy_rejected);
    EXPECT_EQ(r.verdict, SymptomVerdict::VariesElsewhere);
    EXPECT_EQ(to_string(r.verdict), "T_obs varies elsewhere");
}

TEST(Symptoms, CircleExpectsQuarterPi) {
    std::vector<SweepRecord> records;
    for (int i = 0; i <= 8; ++i) records.push_back(record(kPi / 2 * i / 8, i == 4 ? 7000 : 9000, 10000));
    const SymptomReport r = analyze_symptoms(records, HvSpace::Circle);
    EXPECT_DOUBLE_EQ(r.expected_min_phi, kPi / 4);
    EXPECT_EQ(r.verdict, SymptomVerdict::HiddenVariableSymptom);
}

TEST(Symptoms, RejectsShortOrNarrowSweeps) {
    std::vector<SweepRecord> four;
    for (int i = 0; i < 4; ++i) four.push_back(record(kPi / 2 * i / 3, 10, 10));
    EXPECT_THROW(analyze_symptoms(four, HvSpace::Sphere), std::invalid_argument);
    std::vector<SweepRecord> narrow;
    for (int i = 0; i < 6; ++i) narrow.push_back(record(0.1 * i, 10, 10));
    EXPECT_THROW(analyze_symptoms(narrow, HvSpace::Sphere), std::invalid_argument);
}

TEST(TableIo, FormatNumber) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1.0), "1");
    EXPECT_EQ(format_number(std::nan("")), "nan");
    EXPECT_EQ(std::stod(format_number(kPi)), kPi);
}

TEST(TableIo, SweepCsvRoundTrip) {
    const auto records = run_sweep(small("fig11", 5000));
    std::stringstream s;
    write_sweep_csv(s, records);
    EXPECT_EQ(s.str().substr(0, s.str().find('\n')), kSweepCsvHeader);
    const auto back = read_sweep_csv(s);
    ASSERT_EQ(back.size(), records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        EXPECT_EQ(back[i].phi, records[i].phi);
        EXPECT_EQ(back[i].tally, records[i].tally);
        EXPECT_EQ(back[i].seed, records[i].seed);
        EXPECT_EQ(back[i].e_biased, records[i].e_biased);
    }
}

TEST(TableIo, UndefinedEstimatesWrittenAsNan) {
    const SweepRecord r = record(0.0, 0, 10);
    EXPECT_TRUE(r.has_undefined_estimate());
    EXPECT_EQ(r.c_hat, 0.0);
    std::stringstream s;
    write_sweep_csv(s, std::vector<SweepRecord>{r});
    EXPECT_NE(s.str().find(",nan,"), std::string::npos);
    const auto back = read_sweep_csv(s);
    EXPECT_TRUE(std::isnan(back[0].e_biased));
}

TEST(TableIo, RejectsMalformedTables) {
    std::istringstream bad_header("phi,nn\n0,1\n");
    EXPECT_THROW(read_sweep_csv(bad_header), TableFormatError);
    std::istringstream bad_sum(std::string(kSweepCsvHeader) + "\n0,1,1,1,1,0,0,0,5,4,0,0,0,1\n");
    EXPECT_THROW(read_sweep_csv(bad_sum), TableFormatError);
    std::istringstream short_row(std::string(kSweepCsvHeader) + "\n0,1,1\n");
    EXPECT_THROW(read_sweep_csv(short_row), TableFormatError);
}

TEST(TableIo, JsonCarriesConfigHash) {
    const SweepConfig c = small("fig9", 1000);
    const auto records = run_sweep(c);
    const std::string json = sweep_json(c, records);
    EXPECT_NE(json.find(std::to_string(c.hash())), std::string::npos);
    EXPECT_EQ(json, sweep_json(c, run_sweep(c, 1)));
}

}  // namespace
}  // namespace bellsim
