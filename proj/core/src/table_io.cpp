#include "bellsim/table_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace bellsim {

using nlohmann::ordered_json;

namespace {

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_double(const std::string& cell, std::size_t row) {
    if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
    double value = 0.0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || end != cell.data() + cell.size()) {
        throw TableFormatError("row " + std::to_string(row) + ": bad number '" + cell + "'");
    }
    return value;
}

std::uint64_t parse_count(const std::string& cell, std::size_t row) {
    std::uint64_t value = 0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || end != cell.data() + cell.size()) {
        throw TableFormatError("row " + std::to_string(row) + ": bad count '" + cell + "'");
    }
    return value;
}

ordered_json tally_json(const CoincidenceTally& t) {
    return {{"nn", t.nn},
            {"ns", t.ns},
            {"sn", t.sn},
            {"ss", t.ss},
            {"null_a", t.null_a_only},
            {"null_b", t.null_b_only},
            {"null_both", t.null_both},
            {"t", t.emitted},
            {"t_obs", t.observed()}};
}

// NaN becomes null.
ordered_json number_json(double v) { return std::isnan(v) ? ordered_json(nullptr) : ordered_json(v); }

ordered_json config_header(const SweepConfig& config) {
    return {{"config", ordered_json::parse(config.canonical_json())}, {"config_hash", config.hash()}};
}

ordered_json report_json(const BellReport& r) {
    ordered_json terms = ordered_json::array();
    for (double t : r.terms) terms.push_back(number_json(t));
    ordered_json errors = ordered_json::array();
    for (double e : r.term_errors) errors.push_back(number_json(e));
    return {{"test", std::string(to_string(r.test))},
            {"mode", std::string(to_string(r.mode))},
            {"terms", terms},
            {"term_errors", errors},
            {"statistic", number_json(r.statistic)},
            {"bound", r.bound},
            {"std_error", number_json(r.std_error)},
            {"exact", r.exact},
            {"violated", r.violated},
            {"discrepancy", number_json(r.discrepancy)},
            {"non_canonical", r.non_canonical}};
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, end);
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records) {
    out << kSweepCsvHeader << '\n';
    for (const SweepRecord& r : records) {
        const CoincidenceTally& t = r.tally;
        out << format_number(r.phi) << ',' << t.nn << ',' << t.ns << ',' << t.sn << ',' << t.ss << ','
            << t.null_a_only << ',' << t.null_b_only << ',' << t.null_both << ',' << t.emitted << ','
            << t.observed() << ',' << format_number(r.c_hat) << ',' << format_number(r.e_biased) << ','
            << format_number(r.singles_est) << ',' << r.seed << '\n';
    }
}

std::vector<SweepRecord> read_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kSweepCsvHeader) {
        throw TableFormatError(std::string("expected header '") + kSweepCsvHeader + "'");
    }
    std::vector<SweepRecord> records;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const std::vector<std::string> c = split_row(line);
        if (c.size() != 14) throw TableFormatError("row " + std::to_string(row) + ": expected 14 columns");
        SweepRecord r;
        r.phi = parse_double(c[0], row);
        r.tally.nn = parse_count(c[1], row);
        r.tally.ns = parse_count(c[2], row);
        r.tally.sn = parse_count(c[3], row);
        r.tally.ss = parse_count(c[4], row);
        r.tally.null_a_only = parse_count(c[5], row);
        r.tally.null_b_only = parse_count(c[6], row);
        r.tally.null_both = parse_count(c[7], row);
        r.tally.emitted = parse_count(c[8], row);
        if (!r.tally.consistent() || parse_count(c[9], row) != r.tally.observed()) {
            throw TableFormatError("row " + std::to_string(row) + ": categories do not add up");
        }
        r.c_hat = parse_double(c[10], row);
        r.e_biased = parse_double(c[11], row);
        r.singles_est = parse_double(c[12], row);
        r.seed = parse_count(c[13], row);
        records.push_back(r);
    }
    return records;
}

std::string sweep_json(const SweepConfig& config, std::span<const SweepRecord> records) {
    ordered_json doc = config_header(config);
    ordered_json rows = ordered_json::array();
    for (const SweepRecord& r : records) {
        ordered_json row{{"phi", r.phi}};
        row.update(tally_json(r.tally));
        row["c_hat"] = number_json(r.c_hat);
        row["e_biased"] = number_json(r.e_biased);
        row["singles_est"] = number_json(r.singles_est);
        row["seed"] = r.seed;
        rows.push_back(row);
    }
    doc["records"] = rows;
    return doc.dump(2) + "\n";
}

void write_oracle_csv(std::ostream& out, std::span<const OracleRecord> records) {
    out << "phi,p_nn,p_ns,p_sn,p_ss,p_null_a,p_null_b,p_null_both,p_obs,c_hat,e_biased,singles_est,qm\n";
    for (const OracleRecord& r : records) {
        const CategoryProbabilities& p = r.p;
        for (double v : {r.phi, p.nn, p.ns, p.sn, p.ss, p.null_a_only, p.null_b_only, p.null_both, p.observed(),
                         r.c_hat, r.e_biased, r.singles_est}) {
            out << format_number(v) << ',';
        }
        out << format_number(r.qm) << '\n';
    }
}

std::string oracle_json(const SweepConfig& config, std::span<const OracleRecord> records, int resolution) {
    ordered_json doc = config_header(config);
    doc["resolution"] = resolution;
    ordered_json rows = ordered_json::array();
    for (const OracleRecord& r : records) {
        rows.push_back({{"phi", r.phi},
                        {"p_nn", r.p.nn},
                        {"p_ns", r.p.ns},
                        {"p_sn", r.p.sn},
                        {"p_ss", r.p.ss},
                        {"p_null_a", r.p.null_a_only},
                        {"p_null_b", r.p.null_b_only},
                        {"p_null_both", r.p.null_both},
                        {"p_obs", r.p.observed()},
                        {"c_hat", number_json(r.c_hat)},
                        {"e_biased", number_json(r.e_biased)},
                        {"singles_est", number_json(r.singles_est)},
                        {"qm", r.qm}});
    }
    doc["records"] = rows;
    return doc.dump(2) + "\n";
}

void write_bell_csv(std::ostream& out, std::span<const BellReport> reports) {
    out << "test,mode,statistic,bound,std_error,discrepancy,violated,exact,non_canonical\n";
    for (const BellReport& r : reports) {
        out << to_string(r.test) << ',' << to_string(r.mode) << ',' << format_number(r.statistic) << ','
            << format_number(r.bound) << ',' << format_number(r.std_error) << ',' << format_number(r.discrepancy)
            << ',' << (r.violated ? 1 : 0) << ',' << (r.exact ? 1 : 0) << ',' << (r.non_canonical ? 1 : 0) << '\n';
    }
}

std::string bell_json(const SweepConfig& config, std::span<const BellReport> reports,
                      std::span<const CoincidenceTally> tallies) {
    ordered_json doc = config_header(config);
    doc["angles"] = config.bell_angles();
    if (!tallies.empty()) {
        ordered_json runs = ordered_json::array();
        for (const CoincidenceTally& t : tallies) runs.push_back(tally_json(t));
        doc["tallies"] = runs;
    }
    ordered_json list = ordered_json::array();
    for (const BellReport& r : reports) list.push_back(report_json(r));
    doc["reports"] = list;
    return doc.dump(2) + "\n";
}

void write_symptom_csv(std::ostream& out, const SymptomReport& r) {
    out << "points,grid_step,min_phi,min_fraction,max_fraction,expected_min_phi,chi_square,dof,p_value,"
           "significance,constancy_rejected,minimum_at_expected,verdict\n";
    out << r.points << ',' << format_number(r.grid_step) << ',' << format_number(r.min_phi) << ','
        << format_number(r.min_fraction) << ',' << format_number(r.max_fraction) << ','
        << format_number(r.expected_min_phi) << ',' << format_number(r.chi_square) << ',' << r.degrees_of_freedom
        << ',' << format_number(r.p_value) << ',' << format_number(r.significance) << ','
        << (r.constancy_rejected ? 1 : 0) << ',' << (r.minimum_at_expected ? 1 : 0) << ',' << to_string(r.verdict)
        << '\n';
}

std::string symptom_json(const SymptomReport& r) {
    const ordered_json doc{{"points", r.points},
                           {"grid_step", r.grid_step},
                           {"min_phi", r.min_phi},
                           {"min_fraction", r.min_fraction},
                           {"max_fraction", r.max_fraction},
                           {"expected_min_phi", r.expected_min_phi},
                           {"chi_square", r.chi_square},
                           {"degrees_of_freedom", r.degrees_of_freedom},
                           {"p_value", r.p_value},
                           {"significance", r.significance},
                           {"constancy_rejected", r.constancy_rejected},
                           {"minimum_at_expected", r.minimum_at_expected},
                           {"verdict", std::string(to_string(r.verdict))}};
    return doc.dump(2) + "\n";
}

}  // namespace bellsim
