#pragma once

// Command-line front end for the dshell executable.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dshell/dirac.hpp"
#include "dshell/oracle.hpp"
#include "dshell/spectrum.hpp"

namespace dshell::cli {

enum ExitStatus : int {
    kOk = 0,
    kUsage = 2,
    kNonConvergence = 3,
    kBadSelector = 4,
    kOracleDisagreement = 5,
    kInvariantFailure = 6,
};

enum class Command { solve, scan, wavefunction, oracle, verify };
enum class Format { csv, json };
enum class ScanParam { coupling, radius };

std::string to_string(Command c);
std::string to_string(ScanParam p);

/// Bad command line or configuration; exit status 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// "1/2", "-3/2", or a decimal such as "1.5". Throws UsageError with
/// "j must be half-odd-integer" for anything else.
Channel parse_j(std::string_view text);

struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    int count = 0;

    /// "start:stop:count". A single point needs start == stop or count 1.
    static GridSpec parse(std::string_view text);
    std::vector<double> values() const;
};

struct OracleOptions {
    /// Widths in units of r0, strictly decreasing.
    std::vector<double> sigmas{1e-2, 3e-3, 1e-3};
    oracle::BumpShape shape = oracle::BumpShape::gaussian;
};

struct OutputOptions {
    Format format = Format::csv;
    std::string path;  // empty: standard output
    int precision = 12;
};

struct WavefunctionOptions {
    int state = 0;
    int points = 400;
    double r_min = 0.0;  // 0: 1e-4 r0
    double r_max = 0.0;  // 0: r0 + 30 / kappa
};

struct RunConfig {
    Command command = Command::solve;
    double mass = 1.0;
    double radius = 1.0;
    std::optional<double> coupling;
    std::vector<Channel> channels;  // defaults to {1/2}
    SearchConfig search;
    std::optional<ScanParam> scan_param;
    std::optional<GridSpec> grid;
    OracleOptions oracle;
    OutputOptions output;
    WavefunctionOptions wavefunction;
    bool seedless_deterministic = true;

    /// The single-point parameters; requires coupling.
    ShellParams params() const;
};

/// Parses argv (without the program name). Throws UsageError. Returns
/// nullopt after printing help to `out`.
std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out);

/// A rendered table cell. monostate prints as an empty field / JSON null.
using Cell = std::variant<std::monostate, long long, double, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Shortest %g-style rendering with at most `precision` significant digits.
std::string format_double(double v, int precision);

void write_csv(const Table& t, int precision, std::ostream& out);
/// {"meta": meta_json, "rows": [{column: value, ...}, ...]}.
void write_json(const Table& t, const std::string& meta_json, int precision, std::ostream& out);

/// Resolved configuration as a JSON object (for the meta block).
std::string config_json(const RunConfig& cfg);

struct CommandResult {
    Table table;
    int status = kOk;
    std::string message;  // one line for stderr when status != 0
};

CommandResult run_solve(const RunConfig& cfg);
CommandResult run_scan(const RunConfig& cfg);
CommandResult run_wavefunction(const RunConfig& cfg);
CommandResult run_oracle(const RunConfig& cfg);
CommandResult run_verify(const RunConfig& cfg);

/// Full program: parse, dispatch, write the table, map errors to exit
/// statuses.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dshell::cli
