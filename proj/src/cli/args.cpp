#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "CLI11.hpp"
#include "dshell/cli.hpp"
#include "dshell/error.hpp"

namespace dshell::cli {

std::string to_string(Command c) {
    switch (c) {
        case Command::solve: return "solve";
        case Command::scan: return "scan";
        case Command::wavefunction: return "wavefunction";
        case Command::oracle: return "oracle";
        case Command::verify: return "verify";
    }
    return "?";
}

std::string to_string(ScanParam p) { return p == ScanParam::coupling ? "a" : "r0"; }

namespace {

bool parse_int(std::string_view s, long long& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

Channel channel_or_usage(long long two_j) {
    try {
        if (two_j < -1'000'000 || two_j > 1'000'000) {
            throw ValidationError("j must be half-odd-integer of moderate size");
        }
        return Channel::from_two_j(static_cast<int>(two_j));
    } catch (const ValidationError& e) {
        throw UsageError(e.what());
    }
}

}  // namespace

Channel parse_j(std::string_view text) {
    const std::string bad = "j must be half-odd-integer, got '" + std::string(text) + "'";
    const auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        long long num = 0;
        long long den = 0;
        if (!parse_int(text.substr(0, slash), num) || !parse_int(text.substr(slash + 1), den) ||
            den != 2 || num % 2 == 0) {
            throw UsageError(bad);
        }
        return channel_or_usage(num);
    }
    double v = 0.0;
    if (!parse_double(text, v)) throw UsageError(bad);
    const double twice = 2.0 * v;
    if (twice != std::round(twice) || std::fmod(std::abs(twice), 2.0) != 1.0) {
        throw UsageError(bad);
    }
    return channel_or_usage(static_cast<long long>(twice));
}

GridSpec GridSpec::parse(std::string_view text) {
    const std::string bad = "grid must be start:stop:count, got '" + std::string(text) + "'";
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
    if (c2 == std::string_view::npos) throw UsageError(bad);
    GridSpec g;
    long long count = 0;
    if (!parse_double(text.substr(0, c1), g.start) ||
        !parse_double(text.substr(c1 + 1, c2 - c1 - 1), g.stop) ||
        !parse_int(text.substr(c2 + 1), count)) {
        throw UsageError(bad);
    }
    if (count < 1 || count > 1'000'000) throw UsageError("grid count must be in [1, 1000000]");
    g.count = static_cast<int>(count);
    if (g.count > 1 && g.start == g.stop) {
        throw UsageError("grid is not monotone: start == stop with more than one point");
    }
    if (g.count == 1 && g.start != g.stop) {
        throw UsageError("a single-point grid needs start == stop");
    }
    return g;
}

std::vector<double> GridSpec::values() const {
    if (count == 1) return {start};
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] = start + (stop - start) * i / (count - 1);
    }
    out.back() = stop;
    return out;
}

ShellParams RunConfig::params() const {
    if (!coupling) throw UsageError("--coupling is required");
    try {
        return ShellParams(mass, radius, *coupling);
    } catch (const ValidationError& e) {
        throw UsageError(e.what());
    }
}

std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out) {
    CLI::App app{
        "Bound states of the 2+1 dimensional Dirac equation with an attractive delta-shell "
        "potential V(r) = -a delta(r - r0).\nNatural units throughout (hbar = c = 1): M and E "
        "are energies, r0 and r are inverse energies, a is dimensionless.",
        "dshell"};
    app.allow_config_extras(CLI::config_extras_mode::error);

    std::string command;
    double mass = 1.0;
    double radius = 1.0;
    std::optional<double> coupling;
    std::vector<std::string> js;
    std::vector<long long> two_js;
    std::string scan_param;
    std::string grid;
    std::vector<double> sigmas;
    std::string shape = "gaussian";
    std::string format = "csv";
    std::string path;
    int precision = 12;
    int scan_points = 512;
    bool seedless = false;
    int state = 0;
    int points = 400;
    double r_min = 0.0;
    double r_max = 0.0;

    app.add_option("command", command, "solve | scan | wavefunction | oracle | verify")
        ->required()
        ->check(CLI::IsMember({"solve", "scan", "wavefunction", "oracle", "verify"}));
    app.add_option("--mass", mass, "Rest mass M > 0 [energy]")->capture_default_str();
    app.add_option("--radius", radius, "Shell radius r0 > 0 [1/energy]")->capture_default_str();
    app.add_option("--coupling", coupling,
                   "Shell strength a [dimensionless]; required except for verify and a-scans");
    app.add_option("--j", js, "Total angular momentum as a fraction, e.g. 1/2 or -3/2 "
                              "(repeatable; default 1/2)");
    app.add_option("--two-j", two_js, "Odd integer 2j (repeatable)");
    app.add_option("--scan-param", scan_param, "Scanned parameter for scan: a or r0")
        ->check(CLI::IsMember({"a", "r0"}));
    app.add_option("--grid", grid,
                   "Scan grid start:stop:count in the units of --scan-param (inclusive)");
    app.add_option("--sigmas", sigmas,
                   "Oracle bump widths in units of r0, comma separated, strictly decreasing, "
                   "each <= 0.1 (default 0.01,0.003,0.001)")
        ->delimiter(',');
    app.add_option("--shape", shape, "Oracle bump shape: gaussian or top_hat")
        ->check(CLI::IsMember({"gaussian", "top_hat"}))
        ->capture_default_str();
    app.add_option("--format", format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--out", path, "Output file (default: standard output)");
    app.add_option("--precision", precision, "Significant digits for printed numbers (1-17)")
        ->check(CLI::Range(1, 17))
        ->capture_default_str();
    app.set_config("--config", "", "Flat key = value file with # comments; flags override it");
    app.add_option("--scan-points", scan_points, "Energy grid size for root bracketing (>= 16)")
        ->check(CLI::Range(16, 1 << 22))
        ->capture_default_str();
    app.add_flag("--seedless-deterministic", seedless,
                 "Accepted for clarity; output is always deterministic (no random seeds)");
    app.add_option("--state", state, "wavefunction: state index in ascending energy order")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--points", points, "wavefunction: number of radial samples (>= 2)")
        ->check(CLI::Range(2, 10'000'000))
        ->capture_default_str();
    app.add_option("--r-min", r_min, "wavefunction: first radius [1/energy] (default 1e-4 r0)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--r-max", r_max,
                   "wavefunction: last radius [1/energy] (default r0 + 30/kappa)")
        ->check(CLI::NonNegativeNumber);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    RunConfig cfg;
    cfg.command = command == "solve"          ? Command::solve
                  : command == "scan"         ? Command::scan
                  : command == "wavefunction" ? Command::wavefunction
                  : command == "oracle"       ? Command::oracle
                                              : Command::verify;
    cfg.mass = mass;
    cfg.radius = radius;
    cfg.coupling = coupling;
    for (const auto& j : js) cfg.channels.push_back(parse_j(j));
    for (long long t : two_js) cfg.channels.push_back(channel_or_usage(t));
    if (cfg.channels.empty()) cfg.channels.push_back(Channel::from_two_j(1));
    {
        std::vector<Channel> unique;
        for (const Channel& c : cfg.channels) {
            if (std::find(unique.begin(), unique.end(), c) == unique.end()) unique.push_back(c);
        }
        cfg.channels = unique;
    }

    if (!(mass > 0.0) || !std::isfinite(mass)) throw UsageError("--mass must be > 0");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw UsageError("--radius must be > 0");
    if (coupling && !std::isfinite(*coupling)) throw UsageError("--coupling must be finite");

    cfg.search.scan_points = scan_points;
    cfg.output.format = format == "json" ? Format::json : Format::csv;
    cfg.output.path = path;
    cfg.output.precision = precision;
    cfg.oracle.shape = oracle::parse_shape(shape);
    if (!sigmas.empty()) cfg.oracle.sigmas = sigmas;
    for (std::size_t i = 0; i < cfg.oracle.sigmas.size(); ++i) {
        const double s = cfg.oracle.sigmas[i];
        if (!(s > 0.0) || s > 0.1) throw UsageError("--sigmas entries must lie in (0, 0.1]");
        if (i > 0 && !(s < cfg.oracle.sigmas[i - 1])) {
            throw UsageError("--sigmas must be strictly decreasing");
        }
    }
    cfg.wavefunction = {state, points, r_min, r_max};
    cfg.seedless_deterministic = true;

    if (!scan_param.empty()) {
        cfg.scan_param = scan_param == "a" ? ScanParam::coupling : ScanParam::radius;
    }
    if (!grid.empty()) cfg.grid = GridSpec::parse(grid);

    switch (cfg.command) {
        case Command::scan:
            if (!cfg.scan_param) throw UsageError("scan needs --scan-param a|r0");
            if (!cfg.grid) throw UsageError("scan needs --grid start:stop:count");
            if (*cfg.scan_param == ScanParam::radius) {
                if (!cfg.coupling) throw UsageError("--coupling is required");
                for (double r : cfg.grid->values()) {
                    if (!(r > 0.0)) throw UsageError("r0 grid values must be > 0");
                }
            }
            for (double v : cfg.grid->values()) {
                if (!std::isfinite(v)) throw UsageError("grid values must be finite");
            }
            break;
        case Command::solve:
        case Command::oracle:
            cfg.params();
            break;
        case Command::wavefunction:
            cfg.params();
            if (cfg.channels.size() != 1) {
                throw UsageError("wavefunction takes exactly one channel (--j or --two-j)");
            }
            break;
        case Command::verify:
            break;
    }
    return cfg;
}

}  // namespace dshell::cli
