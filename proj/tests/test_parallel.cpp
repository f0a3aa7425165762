#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "dshell/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace dshell;

namespace {

// Oversubscribe so the OpenMP path really interleaves even on one core.
struct Threads {
    Threads() {
#ifdef _OPENMP
        omp_set_num_threads(4);
#endif
    }
};

}  // namespace

TEST_CASE("serial and parallel evaluate agree bitwise") {
    Threads t;
    std::vector<double> xs;
    for (int i = 0; i < 5000; ++i) xs.push_back(0.001 * i);
    const auto f = [](double x) { return std::sin(x) * std::exp(-x) + std::cbrt(x); };
    const auto a = parallel::evaluate_serial(xs, f);
    const auto b = parallel::evaluate_parallel(xs, f);
    const auto c = parallel::evaluate(xs, f, true);
    REQUIRE(a.size() == xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(a[i] == b[i]);
        CHECK(a[i] == c[i]);
    }
}

TEST_CASE("lowest failing index wins") {
    Threads t;
    std::vector<double> xs;
    for (int i = 0; i < 200; ++i) xs.push_back(i);
    const auto f = [](double x) -> double {
        if (x == 37.0 || x == 150.0) throw std::runtime_error("bad " + std::to_string(int(x)));
        return x;
    };
    for (bool par : {false, true}) {
        try {
            parallel::evaluate(xs, f, par);
            FAIL("expected an exception");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()) == "bad 37");
        }
    }
}

TEST_CASE("map_indices keeps input order") {
    Threads t;
    const auto out = parallel::map_indices<std::string>(
        100, [](std::size_t i) { return std::to_string(i * i); }, true);
    REQUIRE(out.size() == 100);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == std::to_string(i * i));
    CHECK(parallel::max_threads() >= 1);
}

TEST_CASE("empty input") {
    const std::vector<double> none;
    CHECK(parallel::evaluate_parallel(none, [](double x) { return x; }).empty());
    CHECK(parallel::map_indices<int>(0, [](std::size_t) { return 1; }, true).empty());
}
