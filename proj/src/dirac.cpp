#include "dshell/dirac.hpp"

#include <cmath>
#include <numbers>

#include "dshell/error.hpp"
#include "dshell/specfun.hpp"

namespace dshell {

using specfun::BesselOrder;
using specfun::bessel_i_scaled;
using specfun::bessel_k_scaled;

ShellParams::ShellParams(double mass, double radius, double coupling)
    : mass_(mass), radius_(radius), coupling_(coupling) {
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw ValidationError("ShellParams: mass must be finite and > 0");
    }
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw ValidationError("ShellParams: radius must be finite and > 0");
    }
    if (!std::isfinite(coupling)) {
        throw ValidationError("ShellParams: coupling must be finite");
    }
}

double ShellParams::alpha() const {
    if (std::abs(std::cos(coupling_)) < 1e-12) {
        throw DomainError("ShellParams::alpha: tan(a) diverges at a = pi/2 + k pi");
    }
    return std::tan(coupling_);
}

double ShellParams::reduced_coupling() const noexcept {
    const double pi = std::numbers::pi;
    double r = coupling_ - pi * std::floor(coupling_ / pi);
    if (r >= pi) {
        r -= pi;
    }
    return r;
}

Channel Channel::from_two_j(int two_j) {
    if (two_j % 2 == 0) {
        throw ValidationError("j must be half-odd-integer (two_j = " + std::to_string(two_j) +
                              " is even)");
    }
    return Channel(two_j);
}

int Channel::upper_order() const noexcept { return std::abs(two_j_ - 1) / 2; }

int Channel::lower_order() const noexcept { return std::abs(two_j_ + 1) / 2; }

std::string Channel::fraction() const { return std::to_string(two_j_) + "/2"; }

Kappa Kappa::from_energy(double energy, double mass) {
    if (!(std::abs(energy) <= mass)) {
        throw DomainError("Kappa: |E| must not exceed M");
    }
    // (M - E)(M + E) keeps relative accuracy near the gap edges.
    return {std::sqrt((mass - energy) * (mass + energy))};
}

double SpinorSample::angle() const { return std::atan2(f, g); }

TransferMatrix::TransferMatrix(double angle) : angle_(angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    m_ = {{{c, -s}, {s, c}}};
}

double TransferMatrix::det() const noexcept { return m_[0][0] * m_[1][1] - m_[0][1] * m_[1][0]; }

TransferMatrix TransferMatrix::transpose() const {
    return TransferMatrix(-angle_, {{{m_[0][0], m_[1][0]}, {m_[0][1], m_[1][1]}}});
}

TransferMatrix TransferMatrix::operator*(const TransferMatrix& rhs) const {
    Entries out{};
    for (int i = 0; i < 2; ++i) {
        for (int k = 0; k < 2; ++k) {
            out[i][k] = m_[i][0] * rhs.m_[0][k] + m_[i][1] * rhs.m_[1][k];
        }
    }
    return TransferMatrix(angle_ + rhs.angle_, out);
}

TransferMatrix transfer_matrix(double a) { return TransferMatrix(a); }

SpinorSample apply_transfer(const TransferMatrix& a, const SpinorSample& s) {
    const auto& m = a.entries();
    return {m[0][0] * s.f + m[0][1] * s.g, m[1][0] * s.f + m[1][1] * s.g, s.r};
}

void require_gap_energy(double energy, const ShellParams& p) {
    const double m = p.mass();
    if (!(std::abs(energy) < m)) {
        throw DomainError("energy must lie strictly inside the mass gap |E| < M");
    }
    if (std::abs(energy) > m - p.energy_margin()) {
        throw DegenerateKappaError("energy within the gap-edge margin; k r0 too small to resolve");
    }
}

namespace {

struct Prefactors {
    double kappa;
    double upper;  // sqrt(M + E)
    double lower;  // sqrt(M - E)
};

Prefactors prefactors(double energy, const ShellParams& p) {
    require_gap_energy(energy, p);
    const double m = p.mass();
    return {Kappa::from_energy(energy, m).value, std::sqrt(m + energy), std::sqrt(m - energy)};
}

void require_radius(double r, bool inner, const ShellParams& p) {
    const double r0 = p.radius();
    const bool ok = inner ? (r > 0.0 && r <= r0) : (r >= r0 && std::isfinite(r));
    if (!ok) {
        throw DomainError(inner ? "inner_solution: radius must satisfy 0 < r <= r0"
                                : "outer_solution: radius must satisfy r >= r0");
    }
}

}  // namespace

SpinorSample inner_solution(const Channel& ch, double energy, double r, const ShellParams& p) {
    require_radius(r, true, p);
    const Prefactors pf = prefactors(energy, p);
    const double x = pf.kappa * r;
    const double shift = std::exp(pf.kappa * (r - p.radius()));
    const double root = std::sqrt(x) * shift;
    const double iu = bessel_i_scaled(BesselOrder(ch.upper_order()), x).mantissa;
    const double il = bessel_i_scaled(BesselOrder(ch.lower_order()), x).mantissa;
    return {pf.upper * root * iu, -pf.lower * root * il, r};
}

SpinorSample outer_solution(const Channel& ch, double energy, double r, const ShellParams& p) {
    require_radius(r, false, p);
    const Prefactors pf = prefactors(energy, p);
    const double x = pf.kappa * r;
    const double shift = std::exp(-pf.kappa * (r - p.radius()));
    const double root = std::sqrt(x) * shift;
    const double ku = bessel_k_scaled(BesselOrder(ch.upper_order()), x).mantissa;
    const double kl = bessel_k_scaled(BesselOrder(ch.lower_order()), x).mantissa;
    return {pf.upper * root * ku, pf.lower * root * kl, r};
}

double inner_ratio(const Channel& ch, double energy, const ShellParams& p) {
    const Prefactors pf = prefactors(energy, p);
    const double x = pf.kappa * p.radius();
    const double iu = bessel_i_scaled(BesselOrder(ch.upper_order()), x).mantissa;
    const double il = bessel_i_scaled(BesselOrder(ch.lower_order()), x).mantissa;
    return -(pf.upper * iu) / (pf.lower * il);
}

double outer_ratio(const Channel& ch, double energy, const ShellParams& p) {
    const Prefactors pf = prefactors(energy, p);
    const double x = pf.kappa * p.radius();
    const double ku = bessel_k_scaled(BesselOrder(ch.upper_order()), x).mantissa;
    const double kl = bessel_k_scaled(BesselOrder(ch.lower_order()), x).mantissa;
    return (pf.upper * ku) / (pf.lower * kl);
}

ShellValues shell_values(const Channel& ch, double energy, const ShellParams& p) {
    const double r0 = p.radius();
    SpinorSample in = inner_solution(ch, energy, r0, p);
    SpinorSample out = outer_solution(ch, energy, r0, p);
    const double n_in = std::hypot(in.f, in.g);
    const double n_out = std::hypot(out.f, out.g);
    in.f /= n_in;
    in.g /= n_in;
    out.f /= n_out;
    out.g /= n_out;
    return {in, out};
}

double matching_residual(const Channel& ch, double energy, const ShellParams& p) {
    const Prefactors pf = prefactors(energy, p);
    const double x = pf.kappa * p.radius();
    const double iu = bessel_i_scaled(BesselOrder(ch.upper_order()), x).mantissa;
    const double il = bessel_i_scaled(BesselOrder(ch.lower_order()), x).mantissa;
    const double ku = bessel_k_scaled(BesselOrder(ch.upper_order()), x).mantissa;
    const double kl = bessel_k_scaled(BesselOrder(ch.lower_order()), x).mantissa;
    // theta- in (pi/2, pi), theta+ in (0, pi/2): the difference never wraps.
    const double theta_in = std::atan2(pf.upper * iu, -pf.lower * il);
    const double theta_out = std::atan2(pf.upper * ku, pf.lower * kl);
    return theta_out - theta_in + p.reduced_coupling();
}

double mobius_residual(const Channel& ch, double energy, const ShellParams& p) {
    const double alpha = p.alpha();
    const ShellValues s = shell_values(ch, energy, p);
    return s.outer.f * (s.inner.g + alpha * s.inner.f) - s.outer.g * (s.inner.f - alpha * s.inner.g);
}

std::pair<Channel, double> reflect_negative_j(const Channel& ch, double energy) {
    return {ch.negated(), -energy};
}

ShellParams reflect_coupling(const ShellParams& p) { return p.with_coupling(-p.coupling()); }

SpinorSample reflect_sample(const SpinorSample& s) { return {s.g, s.f, s.r}; }

}  // namespace dshell
