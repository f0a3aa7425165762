#pragma once

// Radial Dirac problem in 2+1 dimensions with V(r) = -a delta(r - r0).
//
// Radial system (natural units), with F the upper and G the lower amplitude:
//
//     G' + (j/r) G = (E - V - M) F
//    -F' + (j/r) F = (E - V + M) G
//
// Away from the shell the regular and decaying solutions are, for every
// half-odd j (orders folded with I_{-n} = I_n, K_{-n} = K_n):
//
//     inner:  F =  sqrt((M+E) k r) I_|j-1/2|(k r),  G = -sqrt((M-E) k r) I_|j+1/2|(k r)
//     outer:  F =  sqrt((M+E) k r) K_|j-1/2|(k r),  G = +sqrt((M-E) k r) K_|j+1/2|(k r)
//
// with k = sqrt(M^2 - E^2). The shell rotates (F, G) by the SO(2) matrix
// A(a); in terms of theta = atan2(F, G) the jump is theta+ - theta- = -a.

#include <array>
#include <string>
#include <utility>

namespace dshell {

/// Physical configuration (M, r0, a), natural units hbar = c = 1.
/// a <= 0 is accepted (repulsive or free shell) and solved the same way.
class ShellParams {
public:
    ShellParams(double mass, double radius, double coupling);

    double mass() const noexcept { return mass_; }
    double radius() const noexcept { return radius_; }
    double coupling() const noexcept { return coupling_; }

    /// alpha = tan(a). Throws DomainError within 1e-12 of a = pi/2 + k pi.
    double alpha() const;

    /// a reduced into [0, pi). A(a + pi) = -A(a) describes the same shell.
    double reduced_coupling() const noexcept;

    /// Energies with |E| > M - energy_margin() are outside the numeric window.
    double energy_margin() const noexcept { return 1e-9 * mass_; }

    /// The attractive regime a > 0.
    bool attractive() const noexcept { return coupling_ > 0.0; }

    ShellParams with_coupling(double coupling) const { return {mass_, radius_, coupling}; }

    friend bool operator==(const ShellParams&, const ShellParams&) = default;

private:
    double mass_;
    double radius_;
    double coupling_;
};

/// Total angular momentum j = two_j / 2, two_j odd.
class Channel {
public:
    static Channel from_two_j(int two_j);

    int two_j() const noexcept { return two_j_; }
    double j() const noexcept { return 0.5 * two_j_; }

    /// Bessel order carried by F: |j - 1/2|.
    int upper_order() const noexcept;
    /// Bessel order carried by G: |j + 1/2|.
    int lower_order() const noexcept;

    /// "1/2", "-3/2", ...
    std::string fraction() const;

    Channel negated() const { return Channel(-two_j_); }

    friend bool operator==(const Channel&, const Channel&) = default;
    friend auto operator<=>(const Channel&, const Channel&) = default;

private:
    explicit Channel(int two_j) : two_j_(two_j) {}
    int two_j_;
};

/// Decay constant k = sqrt(M^2 - E^2), defined for |E| <= M.
struct Kappa {
    double value = 0.0;

    static Kappa from_energy(double energy, double mass);
};

/// Radial amplitudes (F, G) at radius r.
struct SpinorSample {
    double f = 0.0;
    double g = 0.0;
    double r = 0.0;

    double norm2() const noexcept { return f * f + g * g; }
    /// theta = atan2(F, G), so tan(theta) = F/G.
    double angle() const;
};

/// The SO(2) rotation [[cos a, -sin a], [sin a, cos a]].
class TransferMatrix {
public:
    using Entries = std::array<std::array<double, 2>, 2>;

    explicit TransferMatrix(double angle);

    double angle() const noexcept { return angle_; }
    const Entries& entries() const noexcept { return m_; }
    double operator()(int row, int col) const { return m_.at(row).at(col); }

    double det() const noexcept;
    TransferMatrix transpose() const;
    /// Matrix product; the angle of the result is the sum of the angles.
    TransferMatrix operator*(const TransferMatrix& rhs) const;

private:
    TransferMatrix(double angle, const Entries& m) : angle_(angle), m_(m) {}

    double angle_;
    Entries m_;
};

TransferMatrix transfer_matrix(double a);

/// (F+, G+) = A (F-, G-) at the same radius.
SpinorSample apply_transfer(const TransferMatrix& a, const SpinorSample& s);

/// Regular solution for 0 < r <= r0, scaled by exp(-k r0) so it stays
/// finite for any k r0. Throws DomainError outside the preconditions.
SpinorSample inner_solution(const Channel& ch, double energy, double r, const ShellParams& p);

/// Decaying solution for r >= r0, scaled by exp(k r0).
SpinorSample outer_solution(const Channel& ch, double energy, double r, const ShellParams& p);

/// F-/G- at r0. Throws DegenerateKappaError when |E| > M - energy_margin().
double inner_ratio(const Channel& ch, double energy, const ShellParams& p);

/// F+/G+ at r0.
double outer_ratio(const Channel& ch, double energy, const ShellParams& p);

/// Unit-norm inner and outer amplitudes at r = r0 (before any matching).
struct ShellValues {
    SpinorSample inner;
    SpinorSample outer;
};

ShellValues shell_values(const Channel& ch, double energy, const ShellParams& p);

/// theta+ - theta- + (a mod pi), continuous in E and confined to (-pi, pi).
/// Zeros are exactly the energies where theta+ - theta- = -a (mod pi).
double matching_residual(const Channel& ch, double energy, const ShellParams& p);

/// The same condition in the Moebius (tan) form, cross-multiplied:
/// F+ (G- + alpha F-) - G+ (F- - alpha G-) on unit-norm shell values.
/// Degenerates near a = pi/2 + k pi; only used as a cross-check.
double mobius_residual(const Channel& ch, double energy, const ShellParams& p);

/// (j, E) -> (-j, -E). Amplitudes map as F <-> G (reflect_sample).
std::pair<Channel, double> reflect_negative_j(const Channel& ch, double energy);

/// The reflection also flips the potential: solutions of (j, E, a) map to
/// solutions of (-j, -E, -a).
ShellParams reflect_coupling(const ShellParams& p);

SpinorSample reflect_sample(const SpinorSample& s);

/// Throws DomainError if |E| >= M and DegenerateKappaError if E is inside
/// the margin below the gap edge.
void require_gap_energy(double energy, const ShellParams& p);

}  // namespace dshell
