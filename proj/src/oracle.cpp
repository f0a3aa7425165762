#include "dshell/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dshell/error.hpp"
#include "dshell/parallel.hpp"

namespace dshell::oracle {

BumpShape parse_shape(std::string_view name) {
    if (name == "gaussian") return BumpShape::gaussian;
    if (name == "top_hat") return BumpShape::top_hat;
    throw ValidationError("shape must be gaussian or top_hat, got '" + std::string(name) + "'");
}

std::string to_string(BumpShape shape) {
    return shape == BumpShape::gaussian ? "gaussian" : "top_hat";
}

namespace {
constexpr double kGaussianCut = 10.0;  // support half-width in units of sigma
}

RegularizedPotential::RegularizedPotential(double a, double r0, double sigma, BumpShape shape)
    : a_(a), r0_(r0), sigma_(sigma), shape_(shape) {
    if (!std::isfinite(a) || !(r0 > 0.0) || !std::isfinite(r0)) {
        throw ValidationError("RegularizedPotential: need finite a and r0 > 0");
    }
    if (!(sigma > 0.0) || sigma > r0 / 10.0) {
        throw ValidationError("RegularizedPotential: sigma must satisfy 0 < sigma <= r0/10");
    }
}

double RegularizedPotential::operator()(double r) const noexcept {
    if (r < support_lo() || r > support_hi()) return 0.0;
    if (shape_ == BumpShape::top_hat) return -a_ / (2.0 * sigma_);
    const double u = (r - r0_) / sigma_;
    return -a_ * std::exp(-0.5 * u * u) / (sigma_ * std::sqrt(2.0 * std::numbers::pi));
}

double RegularizedPotential::support_lo() const noexcept {
    return r0_ - (shape_ == BumpShape::gaussian ? kGaussianCut : 1.0) * sigma_;
}

double RegularizedPotential::support_hi() const noexcept {
    return r0_ + (shape_ == BumpShape::gaussian ? kGaussianCut : 1.0) * sigma_;
}

void IntegrationConfig::validate() const {
    if (!(rtol > 0.0) || !(atol > 0.0) || !std::isfinite(rtol) || !std::isfinite(atol)) {
        throw ValidationError("IntegrationConfig: rtol and atol must be positive");
    }
    if (!(r_min >= 0.0) || !(r_max >= 0.0) || !std::isfinite(r_min) || !std::isfinite(r_max)) {
        throw ValidationError("IntegrationConfig: r_min and r_max must be >= 0 (0 = default)");
    }
    if (max_steps < 1) {
        throw ValidationError("IntegrationConfig: max_steps must be positive");
    }
}

double TracePoint::log_norm() const {
    return 0.5 * std::log(sample.norm2()) + static_cast<double>(scale_exponent) * std::numbers::ln2;
}

namespace {

using Vec = std::array<double, 2>;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kRenormHigh = 0x1p64;
constexpr double kRenormLow = 0x1p-64;

struct System {
    double j;
    double energy;
    double mass;
    const RegularizedPotential* v;

    Vec operator()(double r, const Vec& y) const {
        const double vr = (*v)(r);
        const double jr = j / r;
        return {jr * y[0] - (energy - vr + mass) * y[1], (energy - vr - mass) * y[0] - jr * y[1]};
    }
};

class Integrator {
public:
    Integrator(const System& sys, const IntegrationConfig& cfg, double r0, double sigma)
        : sys_(sys), cfg_(cfg), h_min_(1e-14 * r0), sigma_(sigma) {}

    // Integrates from r_start to the last of `stops` (ordered along the
    // direction of integration); records a trace point at every stop flagged
    // as requested.
    SolutionTrace run(double r_start, Vec y, double h0, const std::vector<double>& stops,
                      const std::vector<bool>& requested) {
        SolutionTrace trace;
        double r = r_start;
        double h = h0;
        long exponent = 0;
        Vec k1 = sys_(r, y);
        renormalize(y, k1, exponent, trace);

        for (std::size_t s = 0; s < stops.size(); ++s) {
            const double target = stops[s];
            const double dir = target >= r ? 1.0 : -1.0;
            const double mid = r + 0.5 * (target - r);
            // first step inside the bump may not straddle its structure
            if (sys_.v->operator()(mid) != 0.0) {
                h = std::min(std::abs(h), sigma_ / 8.0);
            }
            h = dir * std::abs(h);
            while (r != target) {
                if (trace.steps + trace.rejected >= cfg_.max_steps) {
                    throw ConvergenceError("oracle integrator: max_steps exhausted at r = " +
                                           std::to_string(r));
                }
                const bool clamp = std::abs(h) >= std::abs(target - r);
                const double step = clamp ? target - r : h;
                Vec y_new;
                Vec k7;
                const double err = attempt(r, y, k1, step, y_new, k7);
                if (err <= 1.0) {
                    r = clamp ? target : r + step;
                    y = y_new;
                    k1 = k7;
                    ++trace.steps;
                    renormalize(y, k1, exponent, trace);
                    const double grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
                    const double next = std::abs(step) * std::max(1.0, grow);
                    h = dir * (clamp ? std::max(std::abs(h), next) : next);
                    if (clamp) {
                        h = dir * std::abs(h);
                    }
                } else {
                    ++trace.rejected;
                    h = step * std::max(0.2, 0.9 * std::pow(err, -0.2));
                    if (std::abs(h) < h_min_) {
                        std::ostringstream msg;
                        msg << "oracle integrator: step size collapsed below 1e-14 r0 at r = " << r;
                        throw ConvergenceError(msg.str());
                    }
                }
            }
            if (requested[s]) {
                trace.points.push_back({{y[0], y[1], r}, exponent});
            }
        }
        trace.end = {{y[0], y[1], r}, exponent};
        return trace;
    }

private:
    double attempt(double r, const Vec& y, const Vec& k1, double h, Vec& y_new, Vec& k7) const {
        auto at = [&](std::initializer_list<std::pair<double, const Vec*>> terms) {
            Vec out = y;
            for (const auto& [c, k] : terms) {
                out[0] += h * c * (*k)[0];
                out[1] += h * c * (*k)[1];
            }
            return out;
        };
        const Vec k2 = sys_(r + c2 * h, at({{a21, &k1}}));
        const Vec k3 = sys_(r + c3 * h, at({{a31, &k1}, {a32, &k2}}));
        const Vec k4 = sys_(r + c4 * h, at({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const Vec k5 = sys_(r + c5 * h, at({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const Vec k6 =
            sys_(r + h, at({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        y_new = at({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        k7 = sys_(r + h, y_new);

        const double y_max = std::max({std::abs(y[0]), std::abs(y[1]), std::abs(y_new[0]),
                                       std::abs(y_new[1])});
        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double e =
                h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            // error relative to the whole vector: the angle is what matters
            const double scale =
                cfg_.atol * y_max + cfg_.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err = std::max(err, std::abs(e) / scale);
        }
        if (!std::isfinite(err)) {
            return 1e300;
        }
        return err;
    }

    static void renormalize(Vec& y, Vec& k, long& exponent, SolutionTrace& trace) {
        const double m = std::max(std::abs(y[0]), std::abs(y[1]));
        if (m > kRenormHigh || (m < kRenormLow && m > 0.0)) {
            const int e = std::ilogb(m);
            y = {std::ldexp(y[0], -e), std::ldexp(y[1], -e)};
            k = {std::ldexp(k[0], -e), std::ldexp(k[1], -e)};
            exponent += e;
            ++trace.renormalizations;
        }
    }

    System sys_;
    const IntegrationConfig& cfg_;
    double h_min_;
    double sigma_;
};

double kappa_of(double energy, double mass) {
    if (!(std::abs(energy) < mass)) {
        throw DomainError("oracle: energy must lie strictly inside the gap |E| < M");
    }
    return std::sqrt((mass - energy) * (mass + energy));
}

// Stops along the integration direction: requested radii plus the bump
// edges, ending at `end`.
void build_stops(double start, double end, const RegularizedPotential& v,
                 std::span<const double> radii, std::vector<double>& stops,
                 std::vector<bool>& requested) {
    const bool outward = end > start;
    std::vector<std::pair<double, bool>> all;
    for (double r : radii) all.emplace_back(r, true);
    for (double edge : {v.support_lo(), v.support_hi(), end}) {
        if (outward ? (edge > start && edge <= end) : (edge < start && edge >= end)) {
            all.emplace_back(edge, false);
        }
    }
    std::sort(all.begin(), all.end(), [&](const auto& x, const auto& y) {
        return outward ? x.first < y.first : x.first > y.first;
    });
    stops.clear();
    requested.clear();
    for (const auto& [r, req] : all) {
        if (!stops.empty() && stops.back() == r && !req) continue;
        stops.push_back(r);
        requested.push_back(req);
    }
}

}  // namespace

SolutionTrace integrate_outward(const Channel& ch, double energy, double mass,
                                const RegularizedPotential& v, const IntegrationConfig& cfg,
                                std::span<const double> radii) {
    cfg.validate();
    kappa_of(energy, mass);
    const double r_min = cfg.r_min > 0.0 ? cfg.r_min : 1e-6 * v.r0();
    double end = v.support_hi();
    for (double r : radii) {
        if (!(r >= r_min)) throw DomainError("integrate_outward: requested radius below r_min");
        end = std::max(end, r);
    }
    // leading power law of the free system near the origin
    const double j = ch.j();
    const double vr = v(r_min);
    Vec y;
    if (j > 0.0) {
        y = {1.0, (energy - vr - mass) * r_min / (2.0 * j + 1.0)};
    } else {
        y = {-(energy - vr + mass) * r_min / (1.0 - 2.0 * j), 1.0};
    }
    std::vector<double> stops;
    std::vector<bool> requested;
    build_stops(r_min, end, v, radii, stops, requested);
    Integrator integ({j, energy, mass, &v}, cfg, v.r0(), v.sigma());
    return integ.run(r_min, y, 1e-2 * r_min, stops, requested);
}

SolutionTrace integrate_inward(const Channel& ch, double energy, double mass,
                               const RegularizedPotential& v, const IntegrationConfig& cfg,
                               std::span<const double> radii) {
    cfg.validate();
    const double kappa = kappa_of(energy, mass);
    const double r_max = cfg.r_max > 0.0 ? cfg.r_max : v.support_hi() + 40.0 / kappa;
    double end = v.support_hi();
    for (double r : radii) {
        if (!(r > 0.0) || r > r_max) {
            throw DomainError("integrate_inward: requested radius outside (0, r_max]");
        }
        end = std::min(end, r);
    }
    if (!(end < r_max)) {
        throw DomainError("integrate_inward: r_max must exceed the bump");
    }
    // decaying branch of the frozen-coefficient system: F/G = (M+E)/kappa
    const Vec y{std::sqrt(mass + energy), std::sqrt(mass - energy)};
    std::vector<double> stops;
    std::vector<bool> requested;
    build_stops(r_max, end, v, radii, stops, requested);
    Integrator integ({ch.j(), energy, mass, &v}, cfg, v.r0(), v.sigma());
    return integ.run(r_max, y, -0.05 / kappa, stops, requested);
}

double shoot_mismatch(const Channel& ch, double energy, double mass,
                      const RegularizedPotential& v, const IntegrationConfig& cfg) {
    const double out = integrate_outward(ch, energy, mass, v, cfg).end.angle();
    const double in = integrate_inward(ch, energy, mass, v, cfg).end.angle();
    // both solutions are defined up to sign, so angles only matter mod pi
    const double d = in - out;
    double w = d - std::numbers::pi * std::round(d / std::numbers::pi);
    if (w <= -0.5 * std::numbers::pi) w += std::numbers::pi;
    return w;
}

void OracleConfig::validate() const {
    integration.validate();
    if (scan_points < 16) throw ValidationError("OracleConfig: scan_points must be >= 16");
    if (!(bracket_tol > 0.0) || !(residual_tol > 0.0)) {
        throw ValidationError("OracleConfig: tolerances must be positive");
    }
}

roots::ScanOptions OracleConfig::scan_options(double mass) const {
    roots::ScanOptions opt;
    opt.points = scan_points;
    opt.parallel = parallel;
    opt.max_jump = 0.5 * std::numbers::pi;
    opt.refine.bracket_tol = bracket_tol * mass;
    opt.refine.residual_tol = residual_tol;
    return opt;
}

std::vector<double> mismatch_on_grid_serial(const Channel& ch, double mass,
                                            const RegularizedPotential& v,
                                            const IntegrationConfig& cfg,
                                            std::span<const double> energies) {
    return parallel::evaluate_serial(
        energies, [&](double e) { return shoot_mismatch(ch, e, mass, v, cfg); });
}

std::vector<double> mismatch_on_grid_parallel(const Channel& ch, double mass,
                                              const RegularizedPotential& v,
                                              const IntegrationConfig& cfg,
                                              std::span<const double> energies) {
    return parallel::evaluate_parallel(
        energies, [&](double e) { return shoot_mismatch(ch, e, mass, v, cfg); });
}

std::vector<double> shoot_bound_states(const Channel& ch, const ShellParams& p, double sigma,
                                       BumpShape shape, const OracleConfig& cfg) {
    cfg.validate();
    const RegularizedPotential v(p.coupling(), p.radius(), sigma, shape);
    const double edge = p.mass() - p.energy_margin();
    const auto mismatch = [&](double e) {
        return shoot_mismatch(ch, e, p.mass(), v, cfg.integration);
    };
    const roots::ScanResult scan =
        roots::find_roots(mismatch, -edge, edge, cfg.scan_options(p.mass()));
    std::vector<double> out;
    out.reserve(scan.roots.size());
    for (const auto& r : scan.roots) out.push_back(r.root);
    return out;
}

Extrapolation extrapolate_sequence(std::span<const double> sigmas,
                                   std::span<const double> energies) {
    const std::size_t n = sigmas.size();
    if (n < 3 || energies.size() != n) {
        throw ValidationError("extrapolation needs at least three (sigma, E) pairs");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(sigmas[i] > 0.0) || !std::isfinite(energies[i]) ||
            (i > 0 && !(sigmas[i] < sigmas[i - 1]))) {
            throw ValidationError("extrapolation needs strictly decreasing positive widths");
        }
    }
    Extrapolation ex;
    ex.sigmas.assign(sigmas.begin(), sigmas.end());
    ex.energies.assign(energies.begin(), energies.end());

    int direction = 0;
    for (std::size_t i = 1; i < n; ++i) {
        const double d = energies[i - 1] - energies[i];
        const int s = (d > 0.0) - (d < 0.0);
        if (s == 0) continue;
        if (direction != 0 && s != direction) {
            throw ConvergenceError("extrapolation failed: E(sigma) is not monotone");
        }
        direction = s;
    }

    const double s1 = sigmas[n - 3], s2 = sigmas[n - 2], s3 = sigmas[n - 1];
    const double d1 = energies[n - 3] - energies[n - 2];
    const double d2 = energies[n - 2] - energies[n - 1];
    if (d1 == 0.0 && d2 == 0.0) {
        ex.e0 = energies[n - 1];
        return ex;
    }
    if (d1 == 0.0 || d2 == 0.0) {
        throw ConvergenceError("extrapolation failed: E(sigma) stalls between widths");
    }
    const double ratio = d1 / d2;
    const auto g = [&](double q) {
        return (std::pow(s1, q) - std::pow(s2, q)) / (std::pow(s2, q) - std::pow(s3, q)) - ratio;
    };
    double lo = 0.05, hi = 12.0;
    double g_lo = g(lo);
    if (g_lo * g(hi) > 0.0) {
        std::ostringstream msg;
        msg << "extrapolation failed: convergence order outside [0.05, 12] (difference ratio "
            << ratio << ")";
        throw ConvergenceError(msg.str());
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0.0) == (g_lo < 0.0)) {
            lo = mid;
            g_lo = gm;
        } else {
            hi = mid;
        }
    }
    const double q = 0.5 * (lo + hi);
    ex.order = q;
    ex.coefficient = d1 / (std::pow(s1, q) - std::pow(s2, q));
    ex.e0 = energies[n - 1] - ex.coefficient * std::pow(s3, q);
    ex.error_bar = std::abs(energies[n - 1] - ex.e0);
    return ex;
}

std::vector<Extrapolation> extrapolate_to_zero_width(const Channel& ch, const ShellParams& p,
                                                     std::span<const double> sigmas,
                                                     BumpShape shape, const OracleConfig& cfg) {
    if (sigmas.size() < 3) {
        throw ValidationError("extrapolate_to_zero_width: need at least three widths");
    }
    std::vector<std::vector<double>> ladder;
    ladder.reserve(sigmas.size());
    for (double s : sigmas) {
        ladder.push_back(shoot_bound_states(ch, p, s, shape, cfg));
        if (ladder.back().size() != ladder.front().size()) {
            std::ostringstream msg;
            msg << "oracle: state count changes along the width ladder (" << ladder.front().size()
                << " at sigma = " << sigmas.front() << ", " << ladder.back().size()
                << " at sigma = " << s << ")";
            throw ConvergenceError(msg.str());
        }
    }
    std::vector<Extrapolation> out;
    for (std::size_t k = 0; k < ladder.front().size(); ++k) {
        std::vector<double> es;
        for (const auto& row : ladder) es.push_back(row[k]);
        out.push_back(extrapolate_sequence(sigmas, es));
    }
    return out;
}

std::vector<double> default_sigma_ladder(double r0) { return {1e-2 * r0, 3e-3 * r0, 1e-3 * r0}; }

}  // namespace dshell::oracle
