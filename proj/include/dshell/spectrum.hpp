#pragma once

// Bound-state search in the mass gap, normalisation, wavefunction sampling
// and multi-parameter spectral tables.

#include <span>
#include <string>
#include <vector>

#include "dshell/dirac.hpp"
#include "dshell/roots.hpp"

namespace dshell {

struct SearchConfig {
    int scan_points = 512;
    /// Target bracket width in units of M.
    double bracket_tol = 1e-12;
    double residual_tol = 1e-10;
    int max_refinements = 200;
    /// Evaluate the energy grid with the OpenMP kernel.
    bool parallel = true;

    /// Throws ValidationError.
    void validate() const;
    roots::ScanOptions scan_options(double mass) const;
};

struct BracketHistory {
    roots::Bracket initial;
    roots::Bracket final_bracket;
    int iterations = 0;
    int evaluations = 0;
    int scan_points_used = 0;
    /// Another root sits within two grid cells even after densification.
    bool close_roots_warning = false;
};

struct NormalizationReport {
    double inner_integral = 0.0;  // int_0^r0 of the unit-at-shell solution
    double outer_integral = 0.0;  // int_r0^R_cut, glued outer solution
    double tail = 0.0;            // analytic bound beyond R_cut
    double cutoff = 0.0;          // R_cut
};

struct BoundState {
    Channel channel = Channel::from_two_j(1);
    double energy = 0.0;
    Kappa kappa;
    double binding = 0.0;  // M - |E|
    double residual_at_root = 0.0;
    /// Multiplies the unit-at-shell inner solution so that
    /// int_0^inf (F^2 + G^2) dr = 1.
    double norm_constant = 0.0;
    /// Factor applied to the unit-at-shell outer solution so it continues
    /// A(a) (F-, G-) across the shell. |outer_scale| = 1 at an exact root.
    double outer_scale = 0.0;
    BracketHistory diagnostics;
    NormalizationReport normalization;
};

/// Energy grid spanning (-M + margin, M - margin) inclusive of both ends.
std::vector<double> energy_grid(const ShellParams& p, int points);

/// Residual on a grid of energies, serial reference implementation.
std::vector<double> residual_on_grid_serial(const Channel& ch, const ShellParams& p,
                                            std::span<const double> energies);

/// Residual on a grid of energies, OpenMP kernel. Bitwise identical to the
/// serial version.
std::vector<double> residual_on_grid_parallel(const Channel& ch, const ShellParams& p,
                                              std::span<const double> energies);

/// All zeros of matching_residual in the gap, refined, normalised, sorted
/// ascending. Empty when there is no sign change. Any half-odd j.
std::vector<BoundState> find_bound_states(const Channel& ch, const ShellParams& p,
                                          const SearchConfig& cfg = {});

/// Refines a residual sign change. Throws DomainError if the bracket has no
/// sign change and ConvergenceError (message carries the final bracket) if
/// max_refinements is exhausted.
double refine_root(const Channel& ch, const ShellParams& p, roots::Bracket bracket,
                   const SearchConfig& cfg = {});

/// Computes outer_scale, norm_constant and the quadrature report.
/// R_cut = r0 + cutoff_decay_lengths / kappa. Throws ConvergenceError if the
/// adaptive quadrature misses its tolerance.
BoundState normalize_state(BoundState state, const ShellParams& p,
                           double cutoff_decay_lengths = 40.0);

/// Normalised (F, G) at r. r <= r0 uses the inner solution, r > r0 the outer.
SpinorSample wavefunction_at(const BoundState& state, const ShellParams& p, double r);

/// Normalised one-sided values at r0: inner = (F-, G-), outer = (F+, G+).
ShellValues shell_limits(const BoundState& state, const ShellParams& p);

std::vector<SpinorSample> sample_wavefunction(const BoundState& state, const ShellParams& p,
                                              std::span<const double> radii);

struct ScanRow {
    ShellParams params;
    Channel channel;
    std::vector<BoundState> states;
    std::string error;  // empty when the row solved

    bool ok() const noexcept { return error.empty(); }
};

/// Cartesian product params x channels, params-major. Rows are solved
/// independently (in parallel when cfg.parallel) and returned in input
/// order. A failing row records its error and the scan continues.
std::vector<ScanRow> spectrum_scan(std::span<const Channel> channels,
                                   std::span<const ShellParams> params,
                                   const SearchConfig& cfg = {});

}  // namespace dshell
