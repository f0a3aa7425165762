#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "dshell/cli.hpp"
#include "dshell/error.hpp"
#include "dshell/verify.hpp"

namespace dshell::cli {

namespace {

long long two_j_cell(const Channel& c) { return c.two_j(); }

}  // namespace

CommandResult run_solve(const RunConfig& cfg) {
    const ShellParams p = cfg.params();
    std::vector<BoundState> all;
    for (const Channel& ch : cfg.channels) {
        for (BoundState& s : find_bound_states(ch, p, cfg.search)) all.push_back(std::move(s));
    }
    std::stable_sort(all.begin(), all.end(), [](const BoundState& x, const BoundState& y) {
        if (x.energy != y.energy) return x.energy < y.energy;
        return x.channel.two_j() < y.channel.two_j();
    });
    CommandResult res;
    res.table.columns = {"two_j", "M", "r0", "a", "E", "kappa", "binding", "residual",
                         "norm_constant"};
    for (const BoundState& s : all) {
        res.table.rows.push_back({two_j_cell(s.channel), p.mass(), p.radius(), p.coupling(),
                                  s.energy, s.kappa.value, s.binding, s.residual_at_root,
                                  s.norm_constant});
    }
    return res;
}

CommandResult run_scan(const RunConfig& cfg) {
    const std::vector<double> values = cfg.grid->values();
    const bool over_a = *cfg.scan_param == ScanParam::coupling;
    std::vector<ShellParams> params;
    for (double v : values) {
        try {
            params.push_back(over_a ? ShellParams(cfg.mass, cfg.radius, v)
                                    : ShellParams(cfg.mass, v, *cfg.coupling));
        } catch (const ValidationError& e) {
            throw UsageError(e.what());
        }
    }
    const std::vector<ScanRow> rows = spectrum_scan(cfg.channels, params, cfg.search);

    CommandResult res;
    res.table.columns = {"grid_value", "two_j", "state_index", "E", "binding", "status"};
    const std::size_t nch = cfg.channels.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const ScanRow& row = rows[i];
        const double gv = values[i / nch];
        if (!row.ok()) {
            res.table.rows.push_back({gv, two_j_cell(row.channel), {}, {}, {}, "failed"});
            if (res.status == kOk) {
                res.status = kNonConvergence;
                std::ostringstream msg;
                msg << "scan row " << to_string(*cfg.scan_param) << "=" << gv
                    << " j=" << row.channel.fraction() << " failed: " << row.error;
                res.message = msg.str();
            }
            continue;
        }
        if (row.states.empty()) {
            res.table.rows.push_back({gv, two_j_cell(row.channel), {}, {}, {}, "empty"});
            continue;
        }
        for (std::size_t k = 0; k < row.states.size(); ++k) {
            const BoundState& s = row.states[k];
            res.table.rows.push_back({gv, two_j_cell(row.channel), static_cast<long long>(k),
                                      s.energy, s.binding, "ok"});
        }
    }
    return res;
}

CommandResult run_wavefunction(const RunConfig& cfg) {
    const ShellParams p = cfg.params();
    const Channel& ch = cfg.channels.front();
    const std::vector<BoundState> states = find_bound_states(ch, p, cfg.search);

    CommandResult res;
    res.table.columns = {"region", "r", "F", "G", "norm2"};
    const auto index = static_cast<std::size_t>(cfg.wavefunction.state);
    if (index >= states.size()) {
        res.status = kBadSelector;
        std::ostringstream msg;
        msg << "state " << index << " does not exist: channel j=" << ch.fraction() << " has "
            << states.size() << " bound state(s)";
        res.message = msg.str();
        return res;
    }
    const BoundState& s = states[index];
    const double r0 = p.radius();
    const double r_min = cfg.wavefunction.r_min > 0.0 ? cfg.wavefunction.r_min : 1e-4 * r0;
    const double r_max =
        cfg.wavefunction.r_max > 0.0 ? cfg.wavefunction.r_max : r0 + 30.0 / s.kappa.value;
    if (!(r_max > r_min)) throw UsageError("--r-max must exceed --r-min");

    const ShellValues shell = shell_limits(s, p);
    auto emit = [&](const char* region, const SpinorSample& v) {
        res.table.rows.push_back({std::string(region), v.r, v.f, v.g, v.norm2()});
    };
    const bool has_shell = r_min <= r0 && r0 <= r_max;
    bool shell_done = false;
    for (double r : roots::uniform_grid(r_min, r_max, cfg.wavefunction.points)) {
        if (has_shell && !shell_done && r >= r0) {
            emit("r0-", shell.inner);
            emit("r0+", shell.outer);
            shell_done = true;
            if (r == r0) continue;
        }
        emit(r < r0 ? "inner" : "outer", wavefunction_at(s, p, r));
    }
    return res;
}

namespace {

std::vector<double> sigma_ladder(const RunConfig& cfg) {
    std::vector<double> rel = cfg.oracle.sigmas;
    // a short ladder is extended by halving so the order q can be fitted
    while (rel.size() < 3) rel.push_back(0.5 * rel.back());
    for (double& s : rel) s *= cfg.radius;
    return rel;
}

}  // namespace

CommandResult run_oracle(const RunConfig& cfg) {
    const ShellParams p = cfg.params();
    const std::vector<double> sigmas = sigma_ladder(cfg);
    CommandResult res;
    res.table.columns = {"two_j", "state_index", "E_analytic", "E_oracle", "error_bar", "order",
                         "agree"};
    for (const Channel& ch : cfg.channels) {
        const std::vector<BoundState> analytic = find_bound_states(ch, p, cfg.search);
        oracle::OracleConfig ocfg;
        const std::vector<oracle::Extrapolation> shot =
            oracle::extrapolate_to_zero_width(ch, p, sigmas, cfg.oracle.shape, ocfg);
        const std::size_t n = std::max(analytic.size(), shot.size());
        for (std::size_t k = 0; k < n; ++k) {
            std::vector<Cell> row{two_j_cell(ch), static_cast<long long>(k)};
            bool agree = false;
            row.push_back(k < analytic.size() ? Cell(analytic[k].energy) : Cell());
            if (k < shot.size()) {
                row.push_back(shot[k].e0);
                row.push_back(shot[k].error_bar);
                row.push_back(shot[k].order);
            } else {
                row.insert(row.end(), {Cell(), Cell(), Cell()});
            }
            if (k < analytic.size() && k < shot.size()) {
                agree = std::abs(analytic[k].energy - shot[k].e0) <=
                        shot[k].error_bar + 1e-4 * p.mass();
            }
            row.push_back(agree);
            res.table.rows.push_back(std::move(row));
            if (!agree && res.status == kOk) {
                res.status = kOracleDisagreement;
                std::ostringstream msg;
                msg << "oracle disagreement for j=" << ch.fraction() << " state " << k << " ("
                    << analytic.size() << " analytic vs " << shot.size() << " oracle states)";
                res.message = msg.str();
            }
        }
    }
    return res;
}

CommandResult run_verify(const RunConfig&) {
    CommandResult res;
    res.table.columns = {"invariant", "worst", "tolerance", "status", "detail"};
    for (const verify::InvariantResult& r : verify::run_all()) {
        res.table.rows.push_back(
            {r.name, r.worst, r.tolerance, std::string(r.passed ? "pass" : "FAIL"), r.detail});
        if (!r.passed && res.status == kOk) {
            res.status = kInvariantFailure;
            res.message = "invariant failed: " + r.name;
        }
    }
    return res;
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        std::optional<RunConfig> parsed = parse_args(args, out);
        if (!parsed) return kOk;
        cfg = std::move(*parsed);
    } catch (const std::exception& e) {
        err << "dshell: usage error: " << e.what() << '\n';
        return kUsage;
    }

    CommandResult res;
    try {
        switch (cfg.command) {
            case Command::solve: res = run_solve(cfg); break;
            case Command::scan: res = run_scan(cfg); break;
            case Command::wavefunction: res = run_wavefunction(cfg); break;
            case Command::oracle: res = run_oracle(cfg); break;
            case Command::verify: res = run_verify(cfg); break;
        }
    } catch (const ConvergenceError& e) {
        err << "dshell: non-convergence: " << e.what() << '\n';
        return kNonConvergence;
    } catch (const std::invalid_argument& e) {
        err << "dshell: usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::domain_error& e) {
        err << "dshell: usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "dshell: error: " << e.what() << '\n';
        return 1;
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (!cfg.output.path.empty()) {
        file.open(cfg.output.path, std::ios::binary);
        if (!file) {
            err << "dshell: usage error: cannot open " << cfg.output.path << " for writing\n";
            return kUsage;
        }
        sink = &file;
    }
    if (cfg.output.format == Format::json) {
        write_json(res.table, config_json(cfg), cfg.output.precision, *sink);
    } else {
        write_csv(res.table, cfg.output.precision, *sink);
    }
    sink->flush();
    if (res.status != kOk) err << "dshell: " << res.message << '\n';
    return res.status;
}

}  // namespace dshell::cli
