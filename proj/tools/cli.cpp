#include "cli.hpp"

#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bellsim/angle_expr.hpp"
#include "bellsim/oracle.hpp"
#include "bellsim/runner.hpp"
#include "bellsim/sweep_config.hpp"
#include "bellsim/symptoms.hpp"
#include "bellsim/table_io.hpp"

namespace bellsim::cli {

namespace {

enum class Format { Csv, Json };

// Flags that mirror SweepConfig. Unset flags leave the preset value alone.
struct ModelFlags {
    std::optional<std::string> band, band_plus, band_minus, cap, fuzz, arc;
};

struct Flags {
    std::string preset;
    std::string config_path;
    std::string format = "csv";
    std::string output;
    unsigned workers = 0;

    std::optional<std::string> space;
    std::optional<std::string> band;  // both stations, both sides
    std::optional<std::string> arc;   // both stations
    ModelFlags a, b;
    std::optional<std::string> smear;
    std::optional<std::string> phi_start, phi_stop, phi_step;
    std::optional<std::uint64_t> pairs, seed;
    std::optional<std::string> modes;
    std::optional<std::string> reference;
    std::optional<double> efficiency;
    std::optional<std::string> test;
    std::optional<std::string> angles;
};

void add_model_flags(CLI::App& app, ModelFlags& m, const std::string& station) {
    const std::string s = "-" + station;
    const std::string who = " of station " + std::string(1, static_cast<char>(std::toupper(station[0])));
    app.add_option("--band" + s, m.band, "Band half-angle on both sides" + who);
    app.add_option("--band" + s + "-plus", m.band_plus, "N-side band half-angle" + who);
    app.add_option("--band" + s + "-minus", m.band_minus, "S-side band half-angle" + who);
    app.add_option("--cap" + s, m.cap, "Missing cap half-angle" + who);
    app.add_option("--fuzz" + s, m.fuzz, "Fuzz ramp width" + who);
    app.add_option("--arc" + s, m.arc, "Missing arc half-angle" + who);
}

void add_common_flags(CLI::App& app, Flags& f) {
    app.add_option("--preset", f.preset, "Start from a bundled preset")
        ->check(CLI::IsMember(preset_names()));
    app.add_option("--config", f.config_path, "JSON config file; its keys override flags")->check(CLI::ExistingFile);
    app.add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--output,-o", f.output, "Output file (default: config output path, else stdout)");
    app.add_option("--workers", f.workers, "Worker threads (0 = all cores)");

    app.add_option("--space", f.space, "sphere | circle");
    app.add_option("--band", f.band, "Band half-angle, both stations and sides (e.g. asin(0.2))");
    app.add_option("--arc", f.arc, "Missing arc half-angle, both stations (circle)");
    add_model_flags(app, f.a, "a");
    add_model_flags(app, f.b, "b");
    app.add_option("--smear", f.smear, "Source smear half-angle rho");
    app.add_option("--phi-start", f.phi_start, "First grid angle");
    app.add_option("--phi-stop", f.phi_stop, "Last grid angle");
    app.add_option("--phi-step", f.phi_step, "Grid step");
    app.add_option("--pairs,-T", f.pairs, "Emitted pairs per sub-experiment");
    app.add_option("--seed", f.seed, "Master seed");
    app.add_option("--modes", f.modes, "Comma-separated denominators: emitted,observed,singles");
    app.add_option("--reference", f.reference, "lrm | qm");
    app.add_option("--efficiency", f.efficiency, "Detector efficiency for the qm reference");
    app.add_option("--test", f.test, "Bell test: simple | standard");
    app.add_option("--angles", f.angles, "Comma-separated Bell angles (a,a',b,b' or a,b,c)");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream stream(text);
    while (std::getline(stream, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double angle_flag(const std::string& flag, const std::string& text) {
    try {
        return parse_angle(text);
    } catch (const AngleParseError& e) {
        throw ConfigError("--" + flag + ": " + e.what());
    }
}

void apply_model(DetectionModel& m, const ModelFlags& f, const std::string& station) {
    if (f.band) m.band_half_angle_plus = m.band_half_angle_minus = angle_flag("band-" + station, *f.band);
    if (f.band_plus) m.band_half_angle_plus = angle_flag("band-" + station + "-plus", *f.band_plus);
    if (f.band_minus) m.band_half_angle_minus = angle_flag("band-" + station + "-minus", *f.band_minus);
    if (f.cap) m.cap_half_angle = angle_flag("cap-" + station, *f.cap);
    if (f.fuzz) m.fuzz_width = angle_flag("fuzz-" + station, *f.fuzz);
    if (f.arc) m.arc_half_angle = angle_flag("arc-" + station, *f.arc);
}

template <typename Parse>
auto enum_flag(const std::string& flag, const std::string& text, Parse parse) {
    try {
        return parse(text);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("--" + flag + ": " + e.what());
    }
}

// preset (or defaults) <- flags <- config file.
SweepConfig resolve_config(const Flags& f) {
    SweepConfig c = f.preset.empty() ? SweepConfig{} : preset(f.preset);
    if (f.space) {
        c.space = enum_flag("space", *f.space, parse_space);
        if (c.space == HvSpace::Circle) c.grid.stop = std::min(c.grid.stop, kPi / 2.0);
    }
    if (f.band) {
        c.model_a.band_half_angle_plus = c.model_a.band_half_angle_minus = angle_flag("band", *f.band);
        c.model_b.band_half_angle_plus = c.model_b.band_half_angle_minus = c.model_a.band_half_angle_plus;
    }
    if (f.arc) c.model_a.arc_half_angle = c.model_b.arc_half_angle = angle_flag("arc", *f.arc);
    apply_model(c.model_a, f.a, "a");
    apply_model(c.model_b, f.b, "b");
    if (f.smear) c.smear = angle_flag("smear", *f.smear);
    if (f.phi_start) c.grid.start = angle_flag("phi-start", *f.phi_start);
    if (f.phi_stop) c.grid.stop = angle_flag("phi-stop", *f.phi_stop);
    if (f.phi_step) c.grid.step = angle_flag("phi-step", *f.phi_step);
    if (f.pairs) c.pairs = *f.pairs;
    if (f.seed) c.seed = *f.seed;
    if (f.modes) {
        c.modes.clear();
        for (const std::string& m : split_list(*f.modes)) c.modes.push_back(enum_flag("modes", m, parse_mode));
    }
    if (f.reference) {
        if (*f.reference == "lrm") c.reference = Reference::Lrm;
        else if (*f.reference == "qm") c.reference = Reference::Qm;
        else throw ConfigError("--reference: expected lrm or qm");
    }
    if (f.efficiency) c.efficiency = *f.efficiency;
    if (f.test) c.bell.test = enum_flag("test", *f.test, parse_bell_test);
    if (f.angles) {
        c.bell.angles.clear();
        for (const std::string& a : split_list(*f.angles)) c.bell.angles.push_back(angle_flag("angles", a));
    }
    if (!f.config_path.empty()) c = load_sweep_config(f.config_path, c);
    c.validate();
    return c;
}

Format format_of(const Flags& f) { return f.format == "json" ? Format::Json : Format::Csv; }

// Writes `body` to --output, else (sweeps only) the config's path for the
// format, else out.
void emit(const Flags& f, const SweepConfig* sweep, std::ostream& out,
          const std::function<void(std::ostream&)>& body) {
    std::string path = f.output;
    if (path.empty() && sweep) path = format_of(f) == Format::Json ? sweep->json_path : sweep->csv_path;
    if (path.empty() || path == "-") {
        body(out);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path);
    body(file);
    if (!file) throw std::runtime_error("error writing " + path);
}

int simulate(const Flags& f, std::ostream& out, std::ostream& err) {
    const SweepConfig c = resolve_config(f);
    const std::vector<SweepRecord> records = run_sweep(c, f.workers);
    emit(f, &c, out, [&](std::ostream& s) {
        if (format_of(f) == Format::Json) s << sweep_json(c, records);
        else write_sweep_csv(s, records);
    });
    int undefined = 0;
    for (const SweepRecord& r : records) {
        if (r.has_undefined_estimate()) {
            err << "undefined estimate at phi = " << format_number(r.phi) << " (zero denominator)\n";
            ++undefined;
        }
    }
    if (undefined > 0) {
        err << undefined << " row(s) with undefined estimates\n";
        return kExitUndefined;
    }
    return kExitOk;
}

int bell(const Flags& f, bool use_oracle, int resolution, std::ostream& out) {
    const SweepConfig c = resolve_config(f);
    std::vector<BellReport> reports;
    std::vector<CoincidenceTally> tallies;
    if (use_oracle) {
        reports = run_bell_oracle(c, resolution);
    } else {
        BellRun run = run_bell(c, f.workers);
        reports = std::move(run.reports);
        tallies = std::move(run.tallies);
    }
    emit(f, nullptr, out, [&](std::ostream& s) {
        if (format_of(f) == Format::Json) s << bell_json(c, reports, tallies);
        else write_bell_csv(s, reports);
    });
    return kExitOk;
}

int oracle(const Flags& f, int resolution, bool aspect, const std::string& landmarks, std::ostream& out) {
    const SweepConfig c = resolve_config(f);
    if (aspect) {
        const AspectPresetReport report = aspect_preset_report(resolution);
        const std::vector<BellReport> both{report.observed, report.emitted};
        emit(f, nullptr, out, [&](std::ostream& s) {
            if (format_of(f) == Format::Json) {
                s << bell_json(preset("aspect-pi15"), both, {});
            } else {
                write_bell_csv(s, both);
                s << "\nterm,t_obs_fraction\n";
                for (std::size_t i = 0; i < report.observed_fraction.size(); ++i) {
                    s << i << ',' << format_number(report.observed_fraction[i]) << '\n';
                }
            }
        });
        return kExitOk;
    }
    if (!landmarks.empty()) {
        const double delta = angle_flag("landmarks", landmarks);
        std::vector<CurveLandmark> points;
        try {
            points = biased_curve_landmarks(delta, resolution);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("--landmarks: ") + e.what());
        }
        emit(f, nullptr, out, [&](std::ostream& s) {
            s << "phi,e_biased,label\n";
            for (const CurveLandmark& p : points) {
                s << format_number(p.phi) << ',' << format_number(p.e_biased) << ",\"" << p.label << "\"\n";
            }
        });
        return kExitOk;
    }
    const std::vector<OracleRecord> records = oracle_sweep(c, resolution);
    emit(f, nullptr, out, [&](std::ostream& s) {
        if (format_of(f) == Format::Json) s << oracle_json(c, records, resolution);
        else write_oracle_csv(s, records);
    });
    return kExitOk;
}

int analyze(const Flags& f, const std::string& input, double significance, std::ostream& out) {
    const SweepConfig c = resolve_config(f);
    std::vector<SweepRecord> records;
    if (!input.empty()) {
        std::ifstream in(input);
        if (!in) throw ConfigError("cannot open " + input);
        try {
            records = read_sweep_csv(in);
        } catch (const TableFormatError& e) {
            throw ConfigError(input + ": " + e.what());
        }
    } else {
        records = run_sweep(c, f.workers);
    }
    SymptomReport report;
    try {
        report = analyze_symptoms(records, c.space, significance);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    emit(f, nullptr, out, [&](std::ostream& s) {
        if (format_of(f) == Format::Json) s << symptom_json(report);
        else write_symptom_csv(s, report);
    });
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Coincidence-experiment simulator for local hidden-variable detection models", "bellsim"};
    app.require_subcommand(1);

    Flags sim_flags, bell_flags, oracle_flags, analyze_flags, config_flags;
    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo phi sweep (CSV/JSON table)");
    add_common_flags(*sim, sim_flags);

    CLI::App* bell_cmd = app.add_subcommand("bell", "Simple or standard Bell test");
    add_common_flags(*bell_cmd, bell_flags);
    bool bell_oracle = false;
    int bell_resolution = kDefaultOracleResolution;
    bell_cmd->add_flag("--oracle", bell_oracle, "Exact probabilities instead of simulation");
    bell_cmd->add_option("--resolution", bell_resolution, "Oracle quadrature nodes per piece")
        ->check(CLI::Range(kMinOracleResolution, 100000));

    CLI::App* oracle_cmd = app.add_subcommand("oracle", "Exact category probabilities over the phi grid");
    add_common_flags(*oracle_cmd, oracle_flags);
    int oracle_resolution = kDefaultOracleResolution;
    bool aspect = false;
    std::string landmarks;
    oracle_cmd->add_option("--resolution", oracle_resolution, "Quadrature nodes per piece")
        ->check(CLI::Range(kMinOracleResolution, 100000));
    oracle_cmd->add_flag("--aspect", aspect, "Report the pi/15 missing-arc preset");
    oracle_cmd->add_option("--landmarks", landmarks, "Biased-curve landmarks for symmetric bands of this half-angle");

    CLI::App* analyze_cmd = app.add_subcommand("analyze", "T_obs symptom analysis of a sweep");
    add_common_flags(*analyze_cmd, analyze_flags);
    std::string input;
    double significance = 0.01;
    analyze_cmd->add_option("--input,-i", input, "Sweep CSV to analyse (default: run the sweep)");
    analyze_cmd->add_option("--significance", significance, "Test level")->check(CLI::Range(1e-12, 0.5));

    CLI::App* config_cmd = app.add_subcommand("config", "Print the resolved config and its hash");
    add_common_flags(*config_cmd, config_flags);
    bool list_presets = false;
    config_cmd->add_flag("--list-presets", list_presets, "List bundled presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (sim->parsed()) return simulate(sim_flags, out, err);
        if (bell_cmd->parsed()) return bell(bell_flags, bell_oracle, bell_resolution, out);
        if (oracle_cmd->parsed()) return oracle(oracle_flags, oracle_resolution, aspect, landmarks, out);
        if (analyze_cmd->parsed()) return analyze(analyze_flags, input, significance, out);
        if (list_presets) {
            for (const std::string& name : preset_names()) out << name << '\n';
            return kExitOk;
        }
        const SweepConfig c = resolve_config(config_flags);
        out << c.canonical_json() << '\n' << "hash " << c.hash() << '\n';
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const UndefinedEstimate& e) {
        err << "undefined estimate: " << e.what() << '\n';
        return kExitUndefined;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace bellsim::cli
