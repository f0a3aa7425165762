#pragma once

// Data-parallel evaluation kernels. Every kernel has a serial reference and
// an OpenMP version with the same contract: out[i] depends only on input i,
// so both produce bitwise-identical results regardless of thread count or
// completion order. If evaluations throw, the exception from the lowest
// index is rethrown after the loop (same as the serial version would).

#include <cstddef>
#include <exception>
#include <span>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dshell::parallel {

template <class Fn>
std::vector<double> evaluate_serial(std::span<const double> xs, Fn&& fn) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) {
        out.push_back(fn(x));
    }
    return out;
}

template <class Fn>
std::vector<double> evaluate_parallel(std::span<const double> xs, Fn&& fn) {
    const auto n = static_cast<std::ptrdiff_t>(xs.size());
    std::vector<double> out(xs.size());
    std::vector<std::exception_ptr> errors(xs.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[i] = fn(xs[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

template <class Fn>
std::vector<double> evaluate(std::span<const double> xs, Fn&& fn, bool use_parallel) {
    return use_parallel ? evaluate_parallel(xs, std::forward<Fn>(fn))
                        : evaluate_serial(xs, std::forward<Fn>(fn));
}

/// out[i] = fn(i) for i in [0, count). T must be default-constructible.
/// fn is expected to handle its own failures; anything it lets escape is
/// rethrown as in evaluate_parallel.
template <class T, class Fn>
std::vector<T> map_indices(std::size_t count, Fn&& fn, bool use_parallel) {
    std::vector<T> out(count);
    if (!use_parallel) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(count);
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[i] = fn(static_cast<std::size_t>(i));
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace dshell::parallel
