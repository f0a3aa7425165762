#include <charconv>
#include <cstdlib>
#include <cmath>
#include <ostream>
#include <string>

#include "dshell/cli.hpp"
#include "json.hpp"

namespace dshell::cli {

std::string format_double(double v, int precision) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

struct CsvCell {
    int precision;
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v, precision); }
    std::string operator()(const std::string& s) const { return csv_field(s); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
};

struct JsonCell {
    int precision;
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(long long v) const { return v; }
    nlohmann::ordered_json operator()(double v) const {
        if (!std::isfinite(v)) return format_double(v, precision);
        // round-trip through the printed form so JSON carries the same digits as CSV
        return std::strtod(format_double(v, precision).c_str(), nullptr);
    }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    nlohmann::ordered_json operator()(bool b) const { return b; }
};

}  // namespace

void write_csv(const Table& t, int precision, std::ostream& out) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        out << (i ? "," : "") << t.columns[i];
    }
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << std::visit(CsvCell{precision}, row[i]);
        }
        out << '\n';
    }
}

void write_json(const Table& t, const std::string& meta_json, int precision, std::ostream& out) {
    nlohmann::ordered_json doc;
    doc["meta"] = nlohmann::ordered_json::parse(meta_json);
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
            obj[t.columns[i]] = std::visit(JsonCell{precision}, row[i]);
        }
        doc["rows"].push_back(std::move(obj));
    }
    out << doc.dump(2) << '\n';
}

std::string config_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["command"] = to_string(cfg.command);
    j["mass"] = cfg.mass;
    j["radius"] = cfg.radius;
    j["coupling"] = cfg.coupling ? nlohmann::ordered_json(*cfg.coupling) : nullptr;
    auto& chans = j["channels"] = nlohmann::ordered_json::array();
    for (const Channel& c : cfg.channels) chans.push_back(c.fraction());
    j["search"] = {{"scan_points", cfg.search.scan_points},
                   {"bracket_tol", cfg.search.bracket_tol},
                   {"residual_tol", cfg.search.residual_tol},
                   {"max_refinements", cfg.search.max_refinements}};
    j["scan_param"] = cfg.scan_param ? nlohmann::ordered_json(to_string(*cfg.scan_param)) : nullptr;
    if (cfg.grid) {
        j["grid"] = {{"start", cfg.grid->start}, {"stop", cfg.grid->stop}, {"count", cfg.grid->count}};
    } else {
        j["grid"] = nullptr;
    }
    j["oracle"] = {{"sigmas_over_r0", cfg.oracle.sigmas}, {"shape", oracle::to_string(cfg.oracle.shape)}};
    j["wavefunction"] = {{"state", cfg.wavefunction.state},
                         {"points", cfg.wavefunction.points},
                         {"r_min", cfg.wavefunction.r_min},
                         {"r_max", cfg.wavefunction.r_max}};
    j["output"] = {{"format", cfg.output.format == Format::json ? "json" : "csv"},
                   {"path", cfg.output.path},
                   {"precision", cfg.output.precision}};
    j["units"] = "natural (hbar = c = 1)";
    j["deterministic"] = cfg.seedless_deterministic;
    return j.dump();
}

}  // namespace dshell::cli
