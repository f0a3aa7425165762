#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "dshell/error.hpp"
#include "dshell/roots.hpp"

using namespace dshell;
using namespace dshell::roots;

TEST_CASE("linear root") {
    RefineOptions opt;
    const auto r = refine_bracketed([](double x) { return x - 0.3; }, {0.0, 1.0}, opt);
    CHECK(r.converged);
    CHECK(std::abs(r.root - 0.3) <= 1e-12);
}

TEST_CASE("bracket already at tolerance returns the midpoint") {
    RefineOptions opt;
    opt.bracket_tol = 1e-6;
    opt.residual_tol = 1.0;
    const auto r = refine_bracketed([](double x) { return x - 0.5; }, {0.4999999, 0.5000004}, opt);
    CHECK(r.converged);
    CHECK(r.root == doctest::Approx(0.5 * (0.4999999 + 0.5000004)).epsilon(1e-16));
    CHECK(r.iterations == 0);
}

TEST_CASE("no sign change is rejected") {
    RefineOptions opt;
    CHECK_THROWS_AS(refine_bracketed([](double x) { return x * x + 1; }, {-1.0, 1.0}, opt),
                    DomainError);
    CHECK_THROWS_AS(refine_bracketed([](double x) { return x; }, {1.0, -1.0}, opt), DomainError);
}

TEST_CASE("evaluations stay inside the bracket") {
    for (double shift : {0.001, 0.2, 0.5, 0.999}) {
        std::vector<double> seen;
        RefineOptions opt;
        const auto f = [&](double x) {
            seen.push_back(x);
            return std::tanh(40.0 * (x - shift)) + 1e-3 * (x - shift);
        };
        const auto r = refine_bracketed(f, {0.0, 1.0}, opt);
        CHECK(r.converged);
        CHECK(std::abs(r.root - shift) <= 1e-12);
        for (double x : seen) {
            CHECK(x >= 0.0);
            CHECK(x <= 1.0);
        }
        CHECK(r.final_bracket.lo >= 0.0);
        CHECK(r.final_bracket.hi <= 1.0);
    }
}

TEST_CASE("stagnating secant falls back to bisection") {
    // one-sided curvature makes plain regula falsi crawl from one end
    RefineOptions opt;
    const auto r = refine_bracketed([](double x) { return std::pow(x, 9) - 1e-9; }, {0.0, 1.0}, opt);
    CHECK(r.converged);
    CHECK(r.root == doctest::Approx(std::pow(1e-9, 1.0 / 9)).epsilon(1e-11));
    CHECK(r.iterations < 120);
}

TEST_CASE("iteration budget exhaustion is reported") {
    RefineOptions opt;
    opt.max_iterations = 3;
    const auto r = refine_bracketed([](double x) { return x - 0.123456789; }, {0.0, 1.0}, opt);
    CHECK_FALSE(r.converged);
    CHECK(r.final_bracket.lo <= 0.123456789);
    CHECK(r.final_bracket.hi >= 0.123456789);
}

TEST_CASE("uniform grid") {
    const auto g = uniform_grid(-1.0, 1.0, 5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == -1.0);
    CHECK(g[2] == 0.0);
    CHECK(g.back() == 1.0);
    CHECK_THROWS_AS(uniform_grid(1.0, 0.0, 5), DomainError);
    CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 1), DomainError);
}

TEST_CASE("scan finds every root of sin") {
    ScanOptions opt;
    opt.points = 64;
    const auto res = find_roots([](double x) { return std::sin(x); }, 0.5, 20.0, opt);
    REQUIRE(res.roots.size() == 6);
    for (std::size_t k = 0; k < 6; ++k) {
        CHECK(std::abs(res.roots[k].root - (k + 1) * M_PI) <= 1e-11);
    }
    CHECK_FALSE(res.densified);
}

TEST_CASE("close roots trigger one densification") {
    ScanOptions opt;
    opt.points = 33;
    // roots at 0.49 and 0.51 sit in adjacent cells of the coarse grid
    const auto f = [](double x) { return (x - 0.49) * (x - 0.51) * (x - 0.9); };
    const auto res = find_roots(f, 0.0, 1.0, opt);
    CHECK(res.densified);
    CHECK(res.points_used == 129);
    REQUIRE(res.roots.size() == 3);
    CHECK(res.roots[0].root == doctest::Approx(0.49).epsilon(1e-12));
    CHECK(res.roots[1].root == doctest::Approx(0.51).epsilon(1e-12));
    CHECK(res.roots[2].root == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("jump filter skips wrap discontinuities") {
    // a sawtooth in (-pi/2, pi/2] has genuine zeros and jumps of size pi
    const auto f = [](double x) {
        const double y = 3.0 * x;
        return y - M_PI * std::round(y / M_PI);
    };
    ScanOptions opt;
    opt.points = 200;
    opt.max_jump = 0.5 * M_PI;
    const auto res = find_roots(f, 0.1, 3.0, opt);
    REQUIRE(res.roots.size() == 2);
    CHECK(res.roots[0].root == doctest::Approx(M_PI / 3).epsilon(1e-12));
    CHECK(res.roots[1].root == doctest::Approx(2 * M_PI / 3).epsilon(1e-12));
}

TEST_CASE("exact zero on a grid point") {
    ScanOptions opt;
    opt.points = 5;
    const auto res = find_roots([](double x) { return x; }, -1.0, 1.0, opt);
    REQUIRE(res.roots.size() == 1);
    CHECK(res.roots[0].root == 0.0);
}

TEST_CASE("refinement failure names the final bracket") {
    ScanOptions opt;
    opt.points = 8;
    opt.refine.residual_tol = 1e-30;  // unreachable for a step function
    opt.refine.max_iterations = 60;
    try {
        find_roots([](double x) { return x < 0.3 ? -1.0 : 1.0; }, 0.0, 1.0, opt);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(std::string(e.what()).find("final bracket") != std::string::npos);
    }
}

TEST_CASE("serial and parallel scans agree bitwise") {
    const auto f = [](double x) { return std::cos(3 * x) - 0.2 * x; };
    ScanOptions a;
    a.parallel = false;
    ScanOptions b;
    b.parallel = true;
    const auto ra = find_roots(f, -5, 5, a);
    const auto rb = find_roots(f, -5, 5, b);
    REQUIRE(ra.roots.size() == rb.roots.size());
    for (std::size_t k = 0; k < ra.roots.size(); ++k) CHECK(ra.roots[k].root == rb.roots[k].root);
}
