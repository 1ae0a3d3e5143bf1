#include "bellsim/sweep_config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "bellsim/angle_expr.hpp"
#include "json.hpp"

namespace bellsim {

using nlohmann::json;

namespace {

double max_phi(HvSpace space) { return space == HvSpace::Sphere ? kPi : kPi / 2.0; }

double angle_value(const json& node, const std::string& where) {
    if (node.is_number()) return node.get<double>();
    if (node.is_string()) {
        try {
            return parse_angle(node.get<std::string>());
        } catch (const AngleParseError& e) {
            throw ConfigError(where + ": " + e.what());
        }
    }
    throw ConfigError(where + ": expected a number or an angle expression");
}

void reject_unknown(const json& object, std::initializer_list<std::string_view> known, const std::string& where) {
    if (!object.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : object.items()) {
        bool found = false;
        for (std::string_view k : known) found = found || key == k;
        if (!found) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

DetectionModel parse_model(const json& node, const std::string& where) {
    reject_unknown(node,
                   {"band_half_angle", "band_half_angle_plus", "band_half_angle_minus", "cap_half_angle",
                    "fuzz_width", "arc_half_angle"},
                   where);
    DetectionModel model;
    if (node.contains("band_half_angle")) {
        model.band_half_angle_plus = model.band_half_angle_minus =
            angle_value(node["band_half_angle"], where + ".band_half_angle");
    }
    auto read = [&](const char* key, double& field) {
        if (node.contains(key)) field = angle_value(node[key], where + "." + key);
    };
    read("band_half_angle_plus", model.band_half_angle_plus);
    read("band_half_angle_minus", model.band_half_angle_minus);
    read("cap_half_angle", model.cap_half_angle);
    read("fuzz_width", model.fuzz_width);
    read("arc_half_angle", model.arc_half_angle);
    return model;
}

json model_json(const DetectionModel& m) {
    return {{"band_half_angle_plus", m.band_half_angle_plus},
            {"band_half_angle_minus", m.band_half_angle_minus},
            {"cap_half_angle", m.cap_half_angle},
            {"fuzz_width", m.fuzz_width},
            {"arc_half_angle", m.arc_half_angle}};
}

std::uint64_t unsigned_value(const json& node, const std::string& where) {
    if (node.is_number_unsigned()) return node.get<std::uint64_t>();
    if (node.is_number_integer() && node.get<std::int64_t>() >= 0) return node.get<std::uint64_t>();
    if (node.is_number_float()) {
        const double v = node.get<double>();
        if (v >= 0.0 && v < 1.8e19 && std::floor(v) == v) return static_cast<std::uint64_t>(v);
    }
    throw ConfigError(where + ": expected a non-negative integer");
}

template <typename T, typename Parse>
T parse_enum(const json& node, const std::string& where, Parse parse) {
    if (!node.is_string()) throw ConfigError(where + ": expected a string");
    try {
        return parse(node.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

Reference parse_reference(std::string_view text) {
    if (text == "lrm") return Reference::Lrm;
    if (text == "qm") return Reference::Qm;
    throw std::invalid_argument("unknown reference '" + std::string(text) + "' (expected lrm or qm)");
}

}  // namespace

std::vector<double> PhiGrid::points() const {
    std::vector<double> out;
    const double span = (stop - start) / step;
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(std::min(stop, start + static_cast<double>(i) * step));
    }
    return out;
}

std::string_view to_string(Reference reference) noexcept { return reference == Reference::Lrm ? "lrm" : "qm"; }

void SweepConfig::validate() const {
    if (schema_version != kSweepSchemaVersion) {
        throw ConfigError("unsupported schema_version " + std::to_string(schema_version) + " (expected " +
                          std::to_string(kSweepSchemaVersion) + ")");
    }
    try {
        model_a.validate();
        model_b.validate();
        PairSource{space, smear}.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(grid.step > 0.0)) throw ConfigError("phi.step must be positive");
    if (!(grid.stop >= grid.start)) throw ConfigError("phi.stop must not be below phi.start");
    if (!(grid.start >= 0.0) || grid.stop > max_phi(space) + 1e-12) {
        throw ConfigError(space == HvSpace::Sphere ? "phi grid must lie within [0, pi] on the sphere"
                                                   : "phi grid must lie within [0, pi/2] on the circle");
    }
    if (grid.points().size() > 100'000) throw ConfigError("phi grid has more than 100000 points");
    if (pairs == 0) throw ConfigError("pairs must be at least 1");
    if (modes.empty()) throw ConfigError("modes must name at least one denominator");
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw ConfigError("efficiency must lie in [0, 1]");
    if (!bell.angles.empty()) {
        const std::size_t expected = bell.test == BellTest::Simple ? 3 : 4;
        if (bell.angles.size() != expected) {
            throw ConfigError("bell.angles needs " + std::to_string(expected) + " entries for the " +
                              std::string(to_string(bell.test)) + " test");
        }
    }
}

std::vector<double> SweepConfig::bell_angles() const {
    if (!bell.angles.empty()) return bell.angles;
    const CanonicalAngles c = canonical_angles(space);
    if (bell.test == BellTest::Standard) return {c.a, c.a_prime, c.b, c.b_prime};
    // Collinear a, b, c with b halfway: the equality case of the simple test.
    return {c.a, c.b, c.a_prime};
}

BellSetup SweepConfig::bell_setup() const {
    return BellSetup{.test = bell.test,
                     .space = space,
                     .model_a = model_a,
                     .model_b = model_b,
                     .smear = smear,
                     .angles = bell_angles(),
                     .pairs = pairs,
                     .master_seed = seed};
}

std::string SweepConfig::canonical_json() const {
    json modes_json = json::array();
    for (DenominatorMode m : modes) modes_json.push_back(std::string(to_string(m)));
    json doc{{"schema_version", schema_version},
             {"name", name},
             {"space", std::string(to_string(space))},
             {"model_a", model_json(model_a)},
             {"model_b", model_json(model_b)},
             {"smear_half_angle", smear},
             {"phi", {{"start", grid.start}, {"stop", grid.stop}, {"step", grid.step}}},
             {"pairs", pairs},
             {"seed", seed},
             {"modes", modes_json},
             {"reference", std::string(to_string(reference))},
             {"efficiency", efficiency},
             {"bell", {{"test", std::string(to_string(bell.test))}, {"angles", bell.angles}}}};
    return doc.dump();
}

std::uint64_t SweepConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_json()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

SweepConfig from_json(const json& doc, const SweepConfig& base) {
    reject_unknown(doc,
                   {"schema_version", "name", "space", "model_a", "model_b", "smear_half_angle", "phi", "pairs",
                    "seed", "modes", "reference", "efficiency", "bell", "output"},
                   "config");
    if (!doc.contains("schema_version")) throw ConfigError("config: schema_version is required");

    SweepConfig config = base;
    config.schema_version = doc["schema_version"].get<int>();
    if (doc.contains("name")) config.name = doc["name"].get<std::string>();
    if (doc.contains("space")) config.space = parse_enum<HvSpace>(doc["space"], "space", parse_space);
    if (doc.contains("model_a")) config.model_a = parse_model(doc["model_a"], "model_a");
    if (doc.contains("model_b")) config.model_b = parse_model(doc["model_b"], "model_b");
    if (doc.contains("smear_half_angle")) config.smear = angle_value(doc["smear_half_angle"], "smear_half_angle");
    if (config.space == HvSpace::Circle) config.grid.stop = std::min(config.grid.stop, kPi / 2.0);
    if (doc.contains("phi")) {
        const json& phi = doc["phi"];
        reject_unknown(phi, {"start", "stop", "step"}, "phi");
        if (phi.contains("start")) config.grid.start = angle_value(phi["start"], "phi.start");
        if (phi.contains("stop")) config.grid.stop = angle_value(phi["stop"], "phi.stop");
        if (phi.contains("step")) config.grid.step = angle_value(phi["step"], "phi.step");
    }
    if (doc.contains("pairs")) config.pairs = unsigned_value(doc["pairs"], "pairs");
    if (doc.contains("seed")) config.seed = unsigned_value(doc["seed"], "seed");
    if (doc.contains("modes")) {
        if (!doc["modes"].is_array()) throw ConfigError("modes: expected an array");
        config.modes.clear();
        for (const json& m : doc["modes"]) config.modes.push_back(parse_enum<DenominatorMode>(m, "modes", parse_mode));
    }
    if (doc.contains("reference")) {
        config.reference = parse_enum<Reference>(doc["reference"], "reference", parse_reference);
    }
    if (doc.contains("efficiency")) {
        if (!doc["efficiency"].is_number()) throw ConfigError("efficiency: expected a number");
        config.efficiency = doc["efficiency"].get<double>();
    }
    if (doc.contains("bell")) {
        const json& bell = doc["bell"];
        reject_unknown(bell, {"test", "angles"}, "bell");
        if (bell.contains("test")) config.bell.test = parse_enum<BellTest>(bell["test"], "bell.test", parse_bell_test);
        if (bell.contains("angles")) {
            if (!bell["angles"].is_array()) throw ConfigError("bell.angles: expected an array");
            config.bell.angles.clear();
            for (const json& a : bell["angles"]) config.bell.angles.push_back(angle_value(a, "bell.angles"));
        }
    }
    if (doc.contains("output")) {
        const json& out = doc["output"];
        reject_unknown(out, {"csv", "json"}, "output");
        if (out.contains("csv")) config.csv_path = out["csv"].get<std::string>();
        if (out.contains("json")) config.json_path = out["json"].get<std::string>();
    }
    return config;
}

}  // namespace

SweepConfig parse_sweep_config(std::string_view json_text, const SweepConfig& base) {
    SweepConfig config;
    try {
        config = from_json(json::parse(json_text), base);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    config.validate();
    return config;
}

SweepConfig load_sweep_config(const std::filesystem::path& path, const SweepConfig& base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_sweep_config(text.str(), base);
}

std::vector<std::string> preset_names() { return {"fig9", "fig10", "fig11", "fig12", "fig13", "aspect-pi15"}; }

SweepConfig preset(std::string_view name) {
    SweepConfig c;
    c.name = std::string(name);
    if (name == "fig9") {
        c.seed = 9;
    } else if (name == "fig10") {
        c.model_a = c.model_b = DetectionModel::symmetric_band(std::asin(0.2));
        c.seed = 10;
    } else if (name == "fig11") {
        c.model_a = c.model_b = DetectionModel::symmetric_band(std::asin(0.5));
        c.seed = 11;
    } else if (name == "fig12") {
        c.smear = kPi / 4.0;
        c.seed = 12;
    } else if (name == "fig13") {
        c.reference = Reference::Qm;
        c.efficiency = 0.8;
        c.seed = 13;
    } else if (name == "aspect-pi15") {
        c.space = HvSpace::Circle;
        c.model_a = DetectionModel::arcs(kPi / 15.0);
        c.grid = {0.0, kPi / 2.0, kPi / 32.0};
        c.seed = 15;
        c.bell.angles = {0.0, kPi / 4.0, kPi / 8.0, 3.0 * kPi / 8.0};
    } else {
        throw ConfigError("unknown preset '" + std::string(name) + "'");
    }
    return c;
}

}  // namespace bellsim
