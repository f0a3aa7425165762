#include "dshell/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "dshell/parallel.hpp"
#include "dshell/specfun.hpp"
#include "dshell/spectrum.hpp"

namespace dshell::verify {

using specfun::BesselOrder;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> xs;
    for (int i = 0; i < n; ++i) {
        xs.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    }
    return xs;
}

InvariantResult make(std::string name, double worst, double tol, std::string detail = {}) {
    return {std::move(name), worst, tol, worst <= tol, std::move(detail)};
}

std::string describe(const Case& c) {
    std::ostringstream s;
    s << "j=" << c.channel.fraction() << " M=" << c.params.mass() << " r0=" << c.params.radius()
      << " a=" << c.params.coupling();
    return s.str();
}

// Tracks the worst error and where it happened.
struct Worst {
    double value = 0.0;
    std::string where;

    void update(double v, const std::string& at) {
        if (!(v <= value)) {  // NaN counts as worst
            value = std::isnan(v) ? kInf : v;
            where = at;
        }
    }
};

double wrap_half_pi(double x) { return x - std::numbers::pi * std::round(x / std::numbers::pi); }

std::vector<std::vector<BoundState>> solve_all(const std::vector<Case>& cases) {
    return parallel::map_indices<std::vector<BoundState>>(
        cases.size(),
        [&](std::size_t i) {
            SearchConfig cfg;
            cfg.parallel = false;
            return find_bound_states(cases[i].channel, cases[i].params, cfg);
        },
        true);
}

std::vector<double> energies(const Channel& ch, const ShellParams& p) {
    SearchConfig cfg;
    cfg.parallel = false;
    std::vector<double> out;
    for (const BoundState& s : find_bound_states(ch, p, cfg)) out.push_back(s.energy);
    return out;
}

// Compares two ascending energy lists; a count mismatch is an infinite error.
void compare_lists(std::vector<double> a, std::vector<double> b, double scale, Worst& w,
                   const std::string& where) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a.size() != b.size()) {
        std::ostringstream s;
        s << where << ": " << a.size() << " vs " << b.size() << " states";
        w.update(kInf, s.str());
        return;
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
        w.update(std::abs(a[k] - b[k]) / scale, where);
    }
}

}  // namespace

std::vector<Case> default_cases() {
    std::vector<Case> out;
    for (double r0 : {0.5, 1.0, 2.0}) {
        for (double a : {0.3, 0.5, 0.7, 1.1}) {
            for (int two_j : {1, -1, 3, -3, 5}) {
                out.push_back({Channel::from_two_j(two_j), ShellParams(1.0, r0, a)});
            }
        }
    }
    return out;
}

InvariantResult check_wronskian() {
    Worst w;
    for (int n = 0; n <= 20; ++n) {
        for (double x : log_grid(0.1, 30.0, 60)) {
            const double v = specfun::bessel_i(BesselOrder(n), x) *
                                 specfun::bessel_k(BesselOrder(n + 1), x) +
                             specfun::bessel_i(BesselOrder(n + 1), x) *
                                 specfun::bessel_k(BesselOrder(n), x);
            w.update(std::abs(v * x - 1.0),
                     "n=" + std::to_string(n) + " x=" + std::to_string(x));
        }
    }
    return make("wronskian I_n K_n+1 + I_n+1 K_n = 1/x", w.value, 1e-12, w.where);
}

InvariantResult check_recurrences() {
    Worst w;
    for (int n = 1; n <= 20; ++n) {
        for (double x : log_grid(0.1, 30.0, 60)) {
            const std::string at = "n=" + std::to_string(n) + " x=" + std::to_string(x);
            const double ri = 2.0 * n / x * specfun::bessel_i(BesselOrder(n), x);
            const double li = specfun::bessel_i(BesselOrder(n - 1), x) -
                              specfun::bessel_i(BesselOrder(n + 1), x);
            w.update(std::abs(li - ri) / std::abs(ri), at + " (I)");
            const double rk = 2.0 * n / x * specfun::bessel_k(BesselOrder(n), x);
            const double lk = specfun::bessel_k(BesselOrder(n + 1), x) -
                              specfun::bessel_k(BesselOrder(n - 1), x);
            w.update(std::abs(lk - rk) / std::abs(rk), at + " (K)");
        }
    }
    return make("three-term recurrences for I_n and K_n", w.value, 1e-10, w.where);
}

InvariantResult check_bridge() {
    Worst w;
    for (int n = 0; n <= 10; ++n) {
        std::complex<double> phase = 1.0;
        for (int k = 0; k < n; ++k) phase *= std::complex<double>(0.0, 1.0);
        for (double x : log_grid(0.1, 20.0, 50)) {
            const std::complex<double> j =
                specfun::complex_bessel_j_series(BesselOrder(n), {0.0, x});
            const std::complex<double> expect = phase * specfun::bessel_i(BesselOrder(n), x);
            w.update(std::abs(j - expect) / std::abs(expect),
                     "n=" + std::to_string(n) + " x=" + std::to_string(x));
        }
    }
    return make("bridge J_n(ix) = i^n I_n(x)", w.value, 1e-10, w.where);
}

InvariantResult check_transfer_orthogonality() {
    Worst w;
    for (double a : log_grid(1e-3, 50.0, 200)) {
        for (double sign : {1.0, -1.0}) {
            const TransferMatrix m = transfer_matrix(sign * a);
            const TransferMatrix p = m.transpose() * m;
            double err = std::abs(m.det() - 1.0);
            for (int i = 0; i < 2; ++i) {
                for (int k = 0; k < 2; ++k) {
                    err = std::max(err, std::abs(p(i, k) - (i == k ? 1.0 : 0.0)));
                }
            }
            w.update(err, "a=" + std::to_string(sign * a));
        }
    }
    return make("transfer matrix orthogonality and det = 1", w.value, 1e-14, w.where);
}

InvariantResult check_group_law(const VerifyOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> angle(-2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
    Worst w;
    for (int i = 0; i < opt.group_law_pairs; ++i) {
        const double a1 = angle(rng);
        const double a2 = angle(rng);
        const TransferMatrix prod = transfer_matrix(a1) * transfer_matrix(a2);
        const TransferMatrix sum = transfer_matrix(a1 + a2);
        double err = 0.0;
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) err = std::max(err, std::abs(prod(r, c) - sum(r, c)));
        }
        w.update(err, "a1=" + std::to_string(a1) + " a2=" + std::to_string(a2));
    }
    return make("group law A(a1) A(a2) = A(a1 + a2)", w.value, 1e-13, w.where);
}

InvariantResult check_norm_preservation(const VerifyOptions& opt) {
    std::mt19937_64 rng(opt.seed + 1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Worst w;
    for (int i = 0; i < 200; ++i) {
        const SpinorSample s{u(rng), u(rng), 1.0};
        const double a = 4.0 * u(rng);
        const SpinorSample t = apply_transfer(transfer_matrix(a), s);
        w.update(std::abs(t.norm2() - s.norm2()) / s.norm2(), "a=" + std::to_string(a));
    }
    return make("transfer matrix preserves F^2 + G^2", w.value, 1e-14, w.where);
}

InvariantResult check_norm_continuity(const std::vector<Case>& cases) {
    const auto states = solve_all(cases);
    Worst w;
    std::size_t count = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        for (const BoundState& s : states[i]) {
            const ShellValues v = shell_limits(s, cases[i].params);
            w.update(std::abs(v.outer.norm2() - v.inner.norm2()) / v.inner.norm2(),
                     describe(cases[i]) + " E=" + std::to_string(s.energy));
            ++count;
        }
    }
    return make("norm continuity at r0 (" + std::to_string(count) + " states)", w.value, 1e-10,
                w.where);
}

InvariantResult check_phase_jump(const std::vector<Case>& cases) {
    const auto states = solve_all(cases);
    Worst w;
    std::size_t count = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        for (const BoundState& s : states[i]) {
            const ShellValues v = shell_limits(s, cases[i].params);
            const double jump = v.outer.angle() - v.inner.angle();
            w.update(std::abs(wrap_half_pi(jump + cases[i].params.coupling())),
                     describe(cases[i]) + " E=" + std::to_string(s.energy));
            ++count;
        }
    }
    return make("phase jump theta+ - theta- = -a mod pi (" + std::to_string(count) + " states)",
                w.value, 1e-9, w.where);
}

namespace {

// Five-point central derivative of the normalised amplitudes.
std::pair<double, double> derivative(const BoundState& s, const ShellParams& p, double r,
                                     double h) {
    const SpinorSample m2 = wavefunction_at(s, p, r - 2 * h);
    const SpinorSample m1 = wavefunction_at(s, p, r - h);
    const SpinorSample p1 = wavefunction_at(s, p, r + h);
    const SpinorSample p2 = wavefunction_at(s, p, r + 2 * h);
    const double df = (m2.f - 8 * m1.f + 8 * p1.f - p2.f) / (12 * h);
    const double dg = (m2.g - 8 * m1.g + 8 * p1.g - p2.g) / (12 * h);
    return {df, dg};
}

double ode_residual_on(const BoundState& s, const ShellParams& p, const std::vector<double>& rs) {
    const double r0 = p.radius();
    const double k = s.kappa.value;
    const double j = s.channel.j();
    const double e = s.energy;
    const double m = p.mass();
    double worst = 0.0;
    for (double r : rs) {
        const double h = std::min(1e-3 * std::min(r, 1.0 / k), 0.25 * std::abs(r - r0));
        const SpinorSample y = wavefunction_at(s, p, r);
        const auto [df, dg] = derivative(s, p, r, h);
        // G' + (j/r) G - (E - M) F and -F' + (j/r) F - (E + M) G
        const double t1[3] = {dg, j / r * y.g, -(e - m) * y.f};
        const double t2[3] = {-df, j / r * y.f, -(e + m) * y.g};
        const double s1 = std::abs(t1[0]) + std::abs(t1[1]) + std::abs(t1[2]);
        const double s2 = std::abs(t2[0]) + std::abs(t2[1]) + std::abs(t2[2]);
        worst = std::max(worst, std::abs(t1[0] + t1[1] + t1[2]) / s1);
        worst = std::max(worst, std::abs(t2[0] + t2[1] + t2[2]) / s2);
    }
    return worst;
}

}  // namespace

InvariantResult check_ode_residual(const std::vector<Case>& cases, const VerifyOptions& opt) {
    const auto states = solve_all(cases);
    const int n = opt.ode_grid_points;
    Worst w;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const ShellParams& p = cases[i].params;
        const double r0 = p.radius();
        for (const BoundState& s : states[i]) {
            const double gap = 1e-3 * r0;
            const auto inner = roots::uniform_grid(gap, r0 - gap, n);
            const auto outer = roots::uniform_grid(r0 + gap, r0 + 30.0 / s.kappa.value, n);
            const double err = std::max(ode_residual_on(s, p, inner), ode_residual_on(s, p, outer));
            w.update(err, describe(cases[i]) + " E=" + std::to_string(s.energy));
        }
    }
    return make("radial ODE residual of the analytic solutions", w.value, 1e-6, w.where);
}

InvariantResult check_spectral_reflection(const std::vector<Case>& cases) {
    Worst w;
    for (const Case& c : cases) {
        if (c.channel.two_j() < 0) continue;
        std::vector<double> neg = energies(c.channel.negated(), c.params);
        for (double& e : neg) e = -e;
        compare_lists(energies(c.channel, c.params), neg, c.params.mass(), w, describe(c));
    }
    return make("spectral reflection E(-j) = -E(j)", w.value, 1e-10,
                w.value <= 1e-10 ? w.where
                                 : w.where + "; the map (j, E) -> (-j, -E) with F <-> G also "
                                             "reverses the sign of the shell coupling");
}

InvariantResult check_charge_conjugation(const std::vector<Case>& cases) {
    Worst w;
    for (const Case& c : cases) {
        if (c.channel.two_j() < 0) continue;
        std::vector<double> neg = energies(c.channel.negated(), c.params);
        for (double& e : neg) e = -e;
        compare_lists(energies(c.channel, reflect_coupling(c.params)), neg, c.params.mass(), w,
                      describe(c));
    }
    return make("reflection with flipped coupling E(-j, a) = -E(j, -a)", w.value, 1e-10, w.where);
}

InvariantResult check_scale_covariance(const std::vector<Case>& cases) {
    Worst w;
    for (const Case& c : cases) {
        const ShellParams& p = c.params;
        const std::vector<double> base = energies(c.channel, p);
        for (double s : {0.5, 2.0, 10.0}) {
            const ShellParams q(s * p.mass(), p.radius() / s, p.coupling());
            std::vector<double> scaled = base;
            for (double& e : scaled) e *= s;
            compare_lists(energies(c.channel, q), scaled, s * p.mass(), w,
                          describe(c) + " s=" + std::to_string(s));
        }
    }
    return make("scale covariance E(sM, r0/s, a) = s E(M, r0, a)", w.value, 1e-9, w.where);
}

std::vector<InvariantResult> run_all(const VerifyOptions& opt) {
    const std::vector<Case> cases = default_cases();
    return {
        check_wronskian(),
        check_recurrences(),
        check_bridge(),
        check_transfer_orthogonality(),
        check_group_law(opt),
        check_norm_preservation(opt),
        check_norm_continuity(cases),
        check_phase_jump(cases),
        check_ode_residual(cases, opt),
        check_spectral_reflection(cases),
        check_charge_conjugation(cases),
        check_scale_covariance(cases),
    };
}

}  // namespace dshell::verify
