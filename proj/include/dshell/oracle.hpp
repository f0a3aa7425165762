#pragma once

// Shooting oracle: the delta shell is replaced by a narrow bump of unit
// area times -a, the radial system is integrated numerically from both
// ends, and the bump width is extrapolated to zero. Nothing here uses the
// Bessel-function solutions; the only inputs are the ODE and its
// frozen-coefficient limits at small and large r.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dshell/dirac.hpp"
#include "dshell/roots.hpp"

namespace dshell::oracle {

enum class BumpShape { gaussian, top_hat };

/// "gaussian" or "top_hat"; throws ValidationError otherwise.
BumpShape parse_shape(std::string_view name);
std::string to_string(BumpShape shape);

class RegularizedPotential {
public:
    /// Throws ValidationError unless 0 < sigma <= r0/10 and r0 > 0.
    RegularizedPotential(double a, double r0, double sigma, BumpShape shape);

    /// Gaussian: -a exp(-(r-r0)^2 / 2 sigma^2) / (sigma sqrt(2 pi)), cut at
    /// |r - r0| > 10 sigma where it is below 1e-22 of its peak.
    /// Top hat: -a / (2 sigma) on [r0 - sigma, r0 + sigma].
    double operator()(double r) const noexcept;

    double a() const noexcept { return a_; }
    double r0() const noexcept { return r0_; }
    double sigma() const noexcept { return sigma_; }
    BumpShape shape() const noexcept { return shape_; }

    /// V vanishes outside [support_lo, support_hi].
    double support_lo() const noexcept;
    double support_hi() const noexcept;

private:
    double a_;
    double r0_;
    double sigma_;
    BumpShape shape_;
};

struct IntegrationConfig {
    double rtol = 1e-10;
    double atol = 1e-12;
    /// Outward start radius; 0 selects 1e-6 r0.
    double r_min = 0.0;
    /// Inward start radius; 0 selects support_hi + 40 / kappa.
    double r_max = 0.0;
    long max_steps = 2'000'000;

    /// Throws ValidationError on negative or non-finite fields.
    void validate() const;
};

/// One requested sample. The physical amplitude is
/// (f, g) * 2^scale_exponent; the mantissa is kept near unit size.
struct TracePoint {
    SpinorSample sample;
    long scale_exponent = 0;

    double angle() const { return sample.angle(); }
    /// Natural log of the physical norm.
    double log_norm() const;
};

struct SolutionTrace {
    std::vector<TracePoint> points;  // one per requested radius, in integration order
    TracePoint end;                  // state at the final radius
    long steps = 0;
    long rejected = 0;
    int renormalizations = 0;
};

/// Integrates the regular solution from r_min out to
/// max(V.support_hi(), largest requested radius). Starting values come from
/// the leading small-r power law of the free system.
/// Throws DomainError if |E| >= M and ConvergenceError if the step size
/// collapses below 1e-14 r0 or max_steps is exhausted.
SolutionTrace integrate_outward(const Channel& ch, double energy, double mass,
                                const RegularizedPotential& v, const IntegrationConfig& cfg,
                                std::span<const double> radii = {});

/// Integrates the decaying solution from r_max in to
/// min(V.support_hi(), smallest requested radius). Same errors.
SolutionTrace integrate_inward(const Channel& ch, double energy, double mass,
                               const RegularizedPotential& v, const IntegrationConfig& cfg,
                               std::span<const double> radii = {});

/// theta_in - theta_out at support_hi, wrapped into (-pi/2, pi/2].
double shoot_mismatch(const Channel& ch, double energy, double mass,
                      const RegularizedPotential& v, const IntegrationConfig& cfg);

struct OracleConfig {
    IntegrationConfig integration;
    int scan_points = 512;
    /// Bracket width target in units of M.
    double bracket_tol = 1e-11;
    double residual_tol = 1e-7;
    bool parallel = true;

    void validate() const;
    roots::ScanOptions scan_options(double mass) const;
};

/// Mismatch on an energy grid; serial reference and OpenMP kernel.
std::vector<double> mismatch_on_grid_serial(const Channel& ch, double mass,
                                            const RegularizedPotential& v,
                                            const IntegrationConfig& cfg,
                                            std::span<const double> energies);
std::vector<double> mismatch_on_grid_parallel(const Channel& ch, double mass,
                                              const RegularizedPotential& v,
                                              const IntegrationConfig& cfg,
                                              std::span<const double> energies);

/// All bound energies of the regularized problem, ascending. Wrap-around
/// discontinuities of the mismatch are skipped.
std::vector<double> shoot_bound_states(const Channel& ch, const ShellParams& p, double sigma,
                                       BumpShape shape, const OracleConfig& cfg = {});

/// Fit of E(sigma) = E0 + c sigma^q through the three smallest widths.
struct Extrapolation {
    double e0 = 0.0;
    double error_bar = 0.0;  // |E(smallest sigma) - E0|
    double order = 0.0;      // q
    double coefficient = 0.0;
    std::vector<double> sigmas;
    std::vector<double> energies;
};

/// sigmas strictly decreasing and positive, at least three. Throws
/// ValidationError on bad input and ConvergenceError when the sequence is
/// not monotone or q falls outside [0.05, 12].
Extrapolation extrapolate_sequence(std::span<const double> sigmas,
                                   std::span<const double> energies);

/// Shoots at every width and extrapolates state by state. Throws
/// ConvergenceError if the number of states changes along the ladder.
std::vector<Extrapolation> extrapolate_to_zero_width(const Channel& ch, const ShellParams& p,
                                                     std::span<const double> sigmas,
                                                     BumpShape shape,
                                                     const OracleConfig& cfg = {});

/// {1e-2, 3e-3, 1e-3} r0.
std::vector<double> default_sigma_ladder(double r0);

}  // namespace dshell::oracle
