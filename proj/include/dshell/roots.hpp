#pragma once

// Sign-change scanning and bracketed refinement shared by the analytic
// spectrum and the shooting oracle.

#include <functional>
#include <limits>
#include <vector>

namespace dshell::roots {

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;

    double width() const noexcept { return hi - lo; }
    double midpoint() const noexcept { return lo + 0.5 * (hi - lo); }
};

struct RefineOptions {
    double bracket_tol = 1e-12;  // absolute
    double residual_tol = 1e-10;
    int max_iterations = 200;
};

struct RefineResult {
    double root = 0.0;
    double residual = 0.0;
    Bracket initial;
    Bracket final_bracket;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

/// Bisection with secant (regula falsi) acceleration. Every evaluation lies
/// strictly inside the initial bracket; a secant step that fails to halve
/// the bracket forces the next step to bisect. Returns the midpoint of the
/// final bracket once it is narrower than bracket_tol and the residual there
/// is below residual_tol. Requires f_lo * f_hi < 0; throws DomainError
/// otherwise.
RefineResult refine_bracketed(const std::function<double(double)>& f, Bracket bracket,
                              double f_lo, double f_hi, const RefineOptions& options);

/// Evaluates f at the bracket ends first.
RefineResult refine_bracketed(const std::function<double(double)>& f, Bracket bracket,
                              const RefineOptions& options);

struct ScanOptions {
    int points = 512;
    /// Sign changes whose residual jump exceeds this are treated as branch
    /// cuts of a wrapped angle and skipped.
    double max_jump = std::numeric_limits<double>::infinity();
    /// Densification factor applied once when two sign changes fall within
    /// two grid cells of each other.
    int refine_factor = 4;
    bool parallel = true;
    RefineOptions refine;
};

struct ScanResult {
    std::vector<RefineResult> roots;  // ascending
    int points_used = 0;
    bool densified = false;
    /// Sign changes still within two cells after densification.
    bool close_roots = false;
};

/// Uniform grid of `points` values spanning [lo, hi] inclusive.
std::vector<double> uniform_grid(double lo, double hi, int points);

/// Scans f on a uniform grid over [lo, hi] and refines every sign change.
/// Grid evaluations go through parallel::evaluate; refinements are serial.
/// Throws ConvergenceError if a bracket fails to converge.
ScanResult find_roots(const std::function<double(double)>& f, double lo, double hi,
                      const ScanOptions& options);

}  // namespace dshell::roots
