#include "dshell/spectrum.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <exception>
#include <sstream>

#include "dshell/error.hpp"
#include "dshell/parallel.hpp"

namespace dshell {

void SearchConfig::validate() const {
    if (scan_points < 16) {
        throw ValidationError("SearchConfig: scan_points must be >= 16");
    }
    if (!(bracket_tol > 0.0) || !(residual_tol > 0.0)) {
        throw ValidationError("SearchConfig: tolerances must be > 0");
    }
    if (max_refinements < 1) {
        throw ValidationError("SearchConfig: max_refinements must be >= 1");
    }
}

roots::ScanOptions SearchConfig::scan_options(double mass) const {
    roots::ScanOptions opt;
    opt.points = scan_points;
    opt.parallel = parallel;
    opt.refine.bracket_tol = bracket_tol * mass;
    opt.refine.residual_tol = residual_tol;
    opt.refine.max_iterations = max_refinements;
    return opt;
}

std::vector<double> energy_grid(const ShellParams& p, int points) {
    const double edge = p.mass() - p.energy_margin();
    return roots::uniform_grid(-edge, edge, points);
}

std::vector<double> residual_on_grid_serial(const Channel& ch, const ShellParams& p,
                                            std::span<const double> energies) {
    return parallel::evaluate_serial(
        energies, [&](double e) { return matching_residual(ch, e, p); });
}

std::vector<double> residual_on_grid_parallel(const Channel& ch, const ShellParams& p,
                                              std::span<const double> energies) {
    return parallel::evaluate_parallel(
        energies, [&](double e) { return matching_residual(ch, e, p); });
}

std::vector<BoundState> find_bound_states(const Channel& ch, const ShellParams& p,
                                          const SearchConfig& cfg) {
    cfg.validate();
    const double edge = p.mass() - p.energy_margin();
    const auto residual = [&](double e) { return matching_residual(ch, e, p); };
    const roots::ScanResult scan = roots::find_roots(residual, -edge, edge, cfg.scan_options(p.mass()));

    std::vector<BoundState> states;
    states.reserve(scan.roots.size());
    for (const roots::RefineResult& r : scan.roots) {
        BoundState s;
        s.channel = ch;
        s.energy = r.root;
        s.kappa = Kappa::from_energy(r.root, p.mass());
        s.binding = p.mass() - std::abs(r.root);
        s.residual_at_root = r.residual;
        s.diagnostics.initial = r.initial;
        s.diagnostics.final_bracket = r.final_bracket;
        s.diagnostics.iterations = r.iterations;
        s.diagnostics.evaluations = r.evaluations;
        s.diagnostics.scan_points_used = scan.points_used;
        s.diagnostics.close_roots_warning = scan.close_roots;
        states.push_back(normalize_state(s, p));
    }
    return states;
}

double refine_root(const Channel& ch, const ShellParams& p, roots::Bracket bracket,
                   const SearchConfig& cfg) {
    cfg.validate();
    const auto residual = [&](double e) { return matching_residual(ch, e, p); };
    const roots::RefineResult r =
        roots::refine_bracketed(residual, bracket, cfg.scan_options(p.mass()).refine);
    if (!r.converged) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "refine_root: no convergence after " << r.iterations << " iterations; bracket ["
            << r.final_bracket.lo << ", " << r.final_bracket.hi << "]";
        throw ConvergenceError(msg.str());
    }
    return r.root;
}

namespace {

// Unit-at-shell inner/outer solutions and the glue factor for one state.
struct Glue {
    double inner_norm;  // |inner_solution(r0)|
    double outer_norm;  // |outer_solution(r0)|
    double outer_scale;
};

Glue glue(const BoundState& s, const ShellParams& p) {
    const double r0 = p.radius();
    const SpinorSample in = inner_solution(s.channel, s.energy, r0, p);
    const SpinorSample out = outer_solution(s.channel, s.energy, r0, p);
    const double n_in = std::hypot(in.f, in.g);
    const double n_out = std::hypot(out.f, out.g);
    const SpinorSample unit_in{in.f / n_in, in.g / n_in, r0};
    const SpinorSample w = apply_transfer(transfer_matrix(p.coupling()), unit_in);
    // match the larger component; the other one then tests the root
    const double scale = std::abs(w.f) >= std::abs(w.g) ? w.f / (out.f / n_out)
                                                          : w.g / (out.g / n_out);
    return {n_in, n_out, scale};
}

double integrate(const std::function<double(double)>& fn, double a, double b) {
    double error = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(fn, a, b, 15, 1e-12, &error);
    if (!std::isfinite(value) || error > 1e-10 * std::abs(value)) {
        std::ostringstream msg;
        msg << "normalize_state: quadrature on [" << a << ", " << b
            << "] did not converge (estimated error " << error << ")";
        throw ConvergenceError(msg.str());
    }
    return value;
}

}  // namespace

BoundState normalize_state(BoundState state, const ShellParams& p, double cutoff_decay_lengths) {
    const double r0 = p.radius();
    const double kappa = state.kappa.value;
    const Glue g = glue(state, p);
    state.outer_scale = g.outer_scale;

    const double cutoff = r0 + cutoff_decay_lengths / kappa;
    const double c2 = g.outer_scale * g.outer_scale;
    const auto inner_density = [&](double r) {
        return inner_solution(state.channel, state.energy, r, p).norm2() / (g.inner_norm * g.inner_norm);
    };
    const auto outer_density = [&](double r) {
        return c2 * outer_solution(state.channel, state.energy, r, p).norm2() /
               (g.outer_norm * g.outer_norm);
    };

    NormalizationReport rep;
    rep.cutoff = cutoff;
    rep.inner_integral = integrate(inner_density, 0.0, r0);
    rep.outer_integral = integrate(outer_density, r0, cutoff);
    // beyond R_cut the density falls off at least as fast as exp(-2 kappa r)
    rep.tail = outer_density(cutoff) / (2.0 * kappa);
    const double total = rep.inner_integral + rep.outer_integral + rep.tail;
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw ConvergenceError("normalize_state: non-finite norm integral");
    }
    state.normalization = rep;
    state.norm_constant = 1.0 / std::sqrt(total);
    return state;
}

SpinorSample wavefunction_at(const BoundState& state, const ShellParams& p, double r) {
    const Glue g = glue(state, p);
    if (r <= p.radius()) {
        SpinorSample s = inner_solution(state.channel, state.energy, r, p);
        const double k = state.norm_constant / g.inner_norm;
        return {k * s.f, k * s.g, r};
    }
    SpinorSample s = outer_solution(state.channel, state.energy, r, p);
    const double k = state.norm_constant * g.outer_scale / g.outer_norm;
    return {k * s.f, k * s.g, r};
}

ShellValues shell_limits(const BoundState& state, const ShellParams& p) {
    const Glue g = glue(state, p);
    const double r0 = p.radius();
    const SpinorSample in = inner_solution(state.channel, state.energy, r0, p);
    const SpinorSample out = outer_solution(state.channel, state.energy, r0, p);
    const double ki = state.norm_constant / g.inner_norm;
    const double ko = state.norm_constant * g.outer_scale / g.outer_norm;
    return {{ki * in.f, ki * in.g, r0}, {ko * out.f, ko * out.g, r0}};
}

std::vector<SpinorSample> sample_wavefunction(const BoundState& state, const ShellParams& p,
                                              std::span<const double> radii) {
    std::vector<SpinorSample> out;
    out.reserve(radii.size());
    for (double r : radii) {
        if (!(r > 0.0)) {
            throw DomainError("sample_wavefunction: radii must be > 0");
        }
        out.push_back(wavefunction_at(state, p, r));
    }
    return out;
}

std::vector<ScanRow> spectrum_scan(std::span<const Channel> channels,
                                   std::span<const ShellParams> params, const SearchConfig& cfg) {
    if (channels.empty() || params.empty()) {
        throw ValidationError("spectrum_scan: channels and params must be non-empty");
    }
    cfg.validate();
    struct Outcome {
        std::vector<BoundState> states;
        std::string error;
    };
    const std::size_t nch = channels.size();
    const std::size_t rows = params.size() * nch;
    SearchConfig row_cfg = cfg;
    row_cfg.parallel = false;  // parallelism lives at the row level

    const auto outcomes = parallel::map_indices<Outcome>(
        rows,
        [&](std::size_t i) {
            Outcome o;
            try {
                o.states = find_bound_states(channels[i % nch], params[i / nch], row_cfg);
            } catch (const std::exception& e) {
                o.error = e.what();
            }
            return o;
        },
        cfg.parallel);

    std::vector<ScanRow> out;
    out.reserve(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        out.push_back({params[i / nch], channels[i % nch], outcomes[i].states, outcomes[i].error});
    }
    return out;
}

}  // namespace dshell
