#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "dshell/error.hpp"
#include "dshell/spectrum.hpp"
#include "oracles.hpp"

using namespace dshell;

namespace {

Channel ch(int two_j) { return Channel::from_two_j(two_j); }

std::vector<double> energies(const Channel& c, const ShellParams& p) {
    std::vector<double> out;
    for (const auto& s : find_bound_states(c, p)) out.push_back(s.energy);
    return out;
}

// Norm integral by composite Gauss-Legendre on the normalised samples,
// independent of the library's adaptive quadrature.
double norm_by_panels(const BoundState& s, const ShellParams& p) {
    const auto density = [&](double r) { return wavefunction_at(s, p, r).norm2(); };
    const double r0 = p.radius();
    const double k = s.kappa.value;
    double total = oracle_ref::gauss_legendre(density, 0.0, r0, 400);
    double lo = r0;
    for (int i = 0; i < 60; ++i) {
        const double hi = lo + 1.0 / k;
        total += oracle_ref::gauss_legendre(density, lo, hi, 20);
        lo = hi;
    }
    return total;
}

}  // namespace

TEST_CASE("search config validation") {
    SearchConfig c;
    CHECK_NOTHROW(c.validate());
    c.scan_points = 8;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = {};
    c.bracket_tol = 0.0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("reference spectrum j = 1/2") {
    // roots of the matching condition from an independent mpmath evaluation
    const double table[3][3] = {{0.99610, 0.97338, 0.95240},
                                {0.78864, 0.72269, 0.73009},
                                {0.29707, 0.32373, 0.39735}};
    const double as[3] = {0.3, 0.7, 1.1};
    const double rs[3] = {0.5, 1.0, 2.0};
    for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) {
            const auto e = energies(ch(1), ShellParams(1.0, rs[k], as[i]));
            REQUIRE(e.size() == 1);
            CHECK(e[0] == doctest::Approx(table[i][k]).epsilon(1e-5));
        }
    }
}

TEST_CASE("free shell binds nothing") {
    for (int two_j : {1, -1, 3, -3, 5}) {
        for (double r0 : {0.5, 1.0, 4.0}) CHECK(energies(ch(two_j), ShellParams(1.0, r0, 0.0)).empty());
    }
}

TEST_CASE("bound state invariants") {
    for (int two_j : {1, -1, 3, 5}) {
        for (double a : {0.5, 1.1, 1.4}) {
            const ShellParams p(1.0, 2.0, a);
            for (const BoundState& s : find_bound_states(ch(two_j), p)) {
                CHECK(std::abs(s.energy) < 1.0);
                CHECK(std::abs(s.residual_at_root) <= 1e-10);
                CHECK(std::abs(matching_residual(s.channel, s.energy, p)) <= 1e-10);
                CHECK(oracle_ref::rel_err(s.kappa.value,
                                          std::sqrt((1 - s.energy) * (1 + s.energy))) <= 1e-14);
                CHECK(s.binding == doctest::Approx(1.0 - std::abs(s.energy)));
                CHECK(s.norm_constant > 0.0);
                CHECK(std::isfinite(s.norm_constant));
                CHECK(std::abs(std::abs(s.outer_scale) - 1.0) <= 1e-9);
                CHECK(s.diagnostics.final_bracket.width() <= 1e-12);
                CHECK(s.diagnostics.initial.lo <= s.energy);
                CHECK(s.diagnostics.initial.hi >= s.energy);
                CHECK(norm_by_panels(s, p) == doctest::Approx(1.0).epsilon(1e-8));
                CHECK(std::abs(mobius_residual(s.channel, s.energy, p)) <= 1e-10);
            }
        }
    }
}

TEST_CASE("shell limits") {
    const ShellParams p(1.0, 1.0, 0.7);
    const auto states = find_bound_states(ch(1), p);
    REQUIRE(states.size() == 1);
    const ShellValues v = shell_limits(states[0], p);
    CHECK(oracle_ref::rel_err(v.outer.norm2(), v.inner.norm2()) <= 1e-10);
    const SpinorSample glued = apply_transfer(transfer_matrix(p.coupling()), v.inner);
    CHECK(std::abs(glued.f - v.outer.f) <= 1e-10);
    CHECK(std::abs(glued.g - v.outer.g) <= 1e-10);
    const double jump = v.outer.angle() - v.inner.angle() + p.coupling();
    CHECK(std::abs(jump - std::numbers::pi * std::round(jump / std::numbers::pi)) <= 1e-9);
    // wavefunction_at switches sides exactly at r0
    const SpinorSample at = wavefunction_at(states[0], p, 1.0);
    CHECK(at.f == v.inner.f);
}

TEST_CASE("normalisation is insensitive to the cutoff") {
    const ShellParams p(1.0, 1.0, 0.5);
    const auto s = find_bound_states(ch(1), p).at(0);
    const BoundState wide = normalize_state(s, p, 80.0);
    CHECK(oracle_ref::rel_err(wide.norm_constant, s.norm_constant) <= 1e-12);
    CHECK(s.normalization.tail < 1e-30);
    CHECK(s.normalization.cutoff == doctest::Approx(1.0 + 40.0 / s.kappa.value));
}

TEST_CASE("sampled wavefunction") {
    const ShellParams p(1.0, 1.0, 0.5);
    const auto s = find_bound_states(ch(1), p).at(0);
    const std::vector<double> radii{1e-8, 1e-4, 0.5, 1.0, 1.5, 1.0 + 30.0 / s.kappa.value};
    const auto samples = sample_wavefunction(s, p, radii);
    REQUIRE(samples.size() == radii.size());
    CHECK(samples[0].norm2() < samples[1].norm2());
    CHECK(samples[0].norm2() < 1e-7);
    CHECK(samples.back().norm2() < 1e-20 * samples[3].norm2());
    const std::vector<double> bad{0.0};
    CHECK_THROWS_AS(sample_wavefunction(s, p, bad), DomainError);
}

TEST_CASE("scale covariance") {
    const auto base = energies(ch(1), ShellParams(1.0, 1.0, 0.7));
    const auto scaled = energies(ch(1), ShellParams(2.0, 0.5, 0.7));
    REQUIRE(base.size() == scaled.size());
    for (std::size_t k = 0; k < base.size(); ++k) CHECK(std::abs(scaled[k] - 2 * base[k]) <= 2e-9);
}

TEST_CASE("coupling near pi/2 is solved by the angle form") {
    for (double r0 : {0.5, 1.0, 2.0}) {
        const ShellParams p(1.0, r0, std::numbers::pi / 2 - 1e-6);
        for (int two_j : {1, -1, 3}) {
            std::vector<BoundState> states;
            CHECK_NOTHROW(states = find_bound_states(ch(two_j), p));
            CHECK_FALSE(states.empty());
        }
    }
    // and exactly at pi/2, where tan(a) does not exist
    CHECK_FALSE(energies(ch(1), ShellParams(1.0, 1.0, std::numbers::pi / 2)).empty());
}

TEST_CASE("repulsive coupling") {
    const auto e = energies(ch(1), ShellParams(1.0, 2.0, -0.5));
    REQUIRE(e.size() == 1);
    CHECK(e[0] == doctest::Approx(-0.99019).epsilon(1e-5));
}

TEST_CASE("refine_root") {
    const ShellParams p(1.0, 1.0, 0.5);
    const double e = refine_root(ch(1), p, {0.8, 0.9});
    CHECK(e == doctest::Approx(find_bound_states(ch(1), p).at(0).energy).epsilon(1e-12));
    CHECK_THROWS_AS(refine_root(ch(1), p, {0.0, 0.1}), DomainError);
    SearchConfig tight;
    tight.max_refinements = 2;
    CHECK_THROWS_AS(refine_root(ch(1), p, {0.8, 0.9}, tight), ConvergenceError);
}

TEST_CASE("energy grid") {
    const ShellParams p(2.0, 1.0, 0.5);
    const auto g = energy_grid(p, 100);
    CHECK(g.front() == doctest::Approx(-2.0 + 2e-9).epsilon(1e-15));
    CHECK(g.back() == doctest::Approx(2.0 - 2e-9).epsilon(1e-15));
}

TEST_CASE("spectrum scan") {
    const std::vector<Channel> chans{ch(1), ch(-1)};
    const std::vector<ShellParams> grid{ShellParams(1.0, 1.0, 0.2), ShellParams(1.0, 1.0, 0.4),
                                        ShellParams(1.0, 1.0, 0.6)};
    SearchConfig serial;
    serial.parallel = false;
    const auto a = spectrum_scan(chans, grid, serial);
    const auto b = spectrum_scan(chans, grid);
    REQUIRE(a.size() == 6);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].ok());
        CHECK(a[i].params == grid[i / 2]);
        CHECK(a[i].channel == chans[i % 2]);
        REQUIRE(a[i].states.size() == b[i].states.size());
        for (std::size_t k = 0; k < a[i].states.size(); ++k) {
            CHECK(a[i].states[k].energy == b[i].states[k].energy);
        }
    }
    // singleton grid reproduces a direct call
    const std::vector<ShellParams> one{grid[1]};
    const auto single = spectrum_scan(chans, one);
    const auto direct = energies(ch(1), grid[1]);
    REQUIRE(single[0].states.size() == direct.size());
    CHECK(single[0].states[0].energy == direct[0]);

    const std::vector<Channel> none;
    CHECK_THROWS_AS(spectrum_scan(none, grid), ValidationError);
}

TEST_CASE("serial and OpenMP residual kernels agree bitwise") {
    const ShellParams p(1.0, 1.0, 0.9);
    const auto grid = energy_grid(p, 777);
    const auto a = residual_on_grid_serial(ch(3), p, grid);
    const auto b = residual_on_grid_parallel(ch(3), p, grid);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}
