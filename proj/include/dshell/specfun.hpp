#pragma once

// Integer-order modified Bessel functions I_n, K_n in double precision,
// with exponentially scaled variants for large arguments, and a complex
// power series for J_n used to cross-check the real-form reduction
// J_n(ix) = i^n I_n(x).
//
// Accuracy target: 1e-12 relative for x in [1e-6, 30]. Outside that window
// the scaled routines stay finite and typically keep ~1e-13, but that is not
// pinned by tests beyond the spot values in tests/test_specfun.cpp.
//
// All functions are pure and thread-safe.

#include <complex>

namespace dshell::specfun {

/// Non-negative Bessel order. Callers fold negative orders first
/// (I_{-n} = I_n and K_{-n} = K_n for integer n); see folded().
class BesselOrder {
public:
    explicit BesselOrder(int n);

    static BesselOrder folded(int n) { return BesselOrder(n < 0 ? -n : n); }

    int value() const noexcept { return n_; }

private:
    int n_;
};

/// value = mantissa * exp(scale_exponent). For the I family the exponent
/// is +x, for the K family it is -x.
struct ScaledValue {
    double mantissa = 0.0;
    double scale_exponent = 0.0;
    bool is_scaled = false;

    /// Composes mantissa and exponent. Throws OverflowError if the result
    /// is not representable; underflow returns 0.
    double unscaled() const;

    /// log(value); requires mantissa > 0.
    double log_value() const;
};

/// I_n(x), x >= 0. Throws DomainError for x < 0 and OverflowError once
/// I_n(x) exceeds the double range (around x ~ 713).
double bessel_i(BesselOrder n, double x);

/// K_n(x), x > 0. Throws DomainError for x <= 0. Underflows to 0 past x ~ 745.
double bessel_k(BesselOrder n, double x);

/// exp(-x) I_n(x) with scale_exponent = x. Finite for every finite x >= 0.
ScaledValue bessel_i_scaled(BesselOrder n, double x);

/// exp(x) K_n(x) with scale_exponent = -x.
ScaledValue bessel_k_scaled(BesselOrder n, double x);

/// Radius of the window in which complex_bessel_j_series is trusted.
inline constexpr double kComplexSeriesWindow = 30.0;

/// J_n(z) by direct power-series summation. Throws AccuracyError when
/// |z| > kComplexSeriesWindow. For real z near the window edge the series
/// cancels heavily; on the imaginary axis every term has the same phase.
std::complex<double> complex_bessel_j_series(BesselOrder n, std::complex<double> z);

}  // namespace dshell::specfun
