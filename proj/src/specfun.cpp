#include "dshell/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "dshell/error.hpp"

namespace dshell::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kLogMax = 709.78;  // log(DBL_MAX) rounded down
constexpr double kSeriesLimit = 2.0;

// I_n(x) by the ascending series; all terms positive, so no cancellation.
double i_series(int n, double x) {
    const double half = 0.5 * x;
    double term = 1.0;
    for (int k = 1; k <= n; ++k) {
        term *= half / k;
    }
    if (term == 0.0) {
        return 0.0;
    }
    const double y = half * half;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= y / (static_cast<double>(k) * (k + n));
        sum += term;
        if (term < kEps * 1e-2 * sum) {
            break;
        }
    }
    return sum;
}

// exp(-x) I_n(x) by Miller's backward recurrence, normalised with
// exp(x) = I_0(x) + 2 sum_{k>=1} I_k(x). The normalisation produces the
// scaled value directly, so nothing overflows for large x.
double i_scaled_miller(int n, double x) {
    const int start = std::max(n, static_cast<int>(x)) + 20 +
                      static_cast<int>(std::sqrt(50.0 * (x + n)));
    constexpr double kBig = 1e250;
    double b_above = 0.0;  // b_{k+1}
    double b = 1.0;        // b_k
    double sum = 0.0;
    double result = 0.0;
    for (int k = start; k >= 1; --k) {
        if (k == n) {
            result = b;
        }
        sum += 2.0 * b;
        const double b_below = b_above + (2.0 * k / x) * b;
        b_above = b;
        b = b_below;
        if (b > kBig) {
            b /= kBig;
            b_above /= kBig;
            sum /= kBig;
            result /= kBig;
        }
    }
    if (n == 0) {
        result = b;
    }
    sum += b;
    return result / sum;
}

// K_0 and K_1 for 0 < x <= 2 from the series with the logarithmic term.
std::pair<double, double> k01_series(double x) {
    constexpr double gamma = std::numbers::egamma;
    const double y = 0.25 * x * x;
    const double log_half = std::log(0.5 * x);

    double a = 1.0;  // y^k / (k!)^2
    double b = 1.0;  // y^k / (k! (k+1)!)
    double harmonic = 0.0;
    double i0 = 0.0;
    double i1_over_half = 0.0;
    double k0_sum = 0.0;
    double k1_sum = 0.0;
    for (int k = 0; k < 60; ++k) {
        const double harmonic_next = harmonic + 1.0 / (k + 1);
        i0 += a;
        i1_over_half += b;
        k0_sum += a * harmonic;
        k1_sum += b * ((harmonic - gamma) + (harmonic_next - gamma));
        if (a < kEps * 1e-3 && k > 2) {
            break;
        }
        a *= y / ((k + 1.0) * (k + 1.0));
        b *= y / ((k + 1.0) * (k + 2.0));
        harmonic = harmonic_next;
    }
    const double i1 = 0.5 * x * i1_over_half;
    const double k0 = -(log_half + gamma) * i0 + k0_sum;
    const double k1 = 1.0 / x + log_half * i1 - 0.25 * x * k1_sum;
    return {k0, k1};
}

// exp(x) K_0(x), exp(x) K_1(x) for x > 2: Steed's evaluation of the
// Temme continued fraction at order zero.
std::pair<double, double> k01_scaled_cf(double x) {
    constexpr double a1 = 0.25;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    int i = 1;
    for (; i < 10000; ++i) {
        a -= 2 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < kEps) {
            break;
        }
    }
    if (i == 10000) {
        throw ConvergenceError("bessel_k: continued fraction failed to converge at x = " +
                               std::to_string(x));
    }
    h *= a1;
    const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
    const double k1 = k0 * (x + 0.5 - h) / x;
    return {k0, k1};
}

// Upward recurrence K_{m+1} = K_{m-1} + (2m/x) K_m, stable for K.
double k_upward(int n, double x, double k0, double k1) {
    if (n == 0) {
        return k0;
    }
    double prev = k0;
    double cur = k1;
    for (int m = 1; m < n; ++m) {
        const double next = prev + (2.0 * m / x) * cur;
        prev = cur;
        cur = next;
    }
    if (!std::isfinite(cur)) {
        throw OverflowError("bessel_k: K_" + std::to_string(n) + "(" + std::to_string(x) +
                            ") overflows");
    }
    return cur;
}

void require_nonneg(double x, const char* what) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw DomainError(std::string(what) + ": argument must be finite and >= 0, got " +
                          std::to_string(x));
    }
}

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError(std::string(what) + ": argument must be finite and > 0, got " +
                          std::to_string(x));
    }
}

}  // namespace

BesselOrder::BesselOrder(int n) : n_(n) {
    if (n < 0) {
        throw DomainError("BesselOrder: negative order " + std::to_string(n) +
                          " (fold with BesselOrder::folded)");
    }
}

double ScaledValue::unscaled() const {
    if (!is_scaled || mantissa == 0.0) {
        return mantissa;
    }
    const double mag = std::abs(mantissa);
    if (scale_exponent + std::log(mag) > kLogMax) {
        throw OverflowError("ScaledValue: value exceeds double range");
    }
    if (std::abs(scale_exponent) < 700.0) {
        return mantissa * std::exp(scale_exponent);
    }
    return std::copysign(std::exp(scale_exponent + std::log(mag)), mantissa);
}

double ScaledValue::log_value() const {
    if (!(mantissa > 0.0)) {
        throw DomainError("ScaledValue::log_value: mantissa must be positive");
    }
    return std::log(mantissa) + (is_scaled ? scale_exponent : 0.0);
}

ScaledValue bessel_i_scaled(BesselOrder order, double x) {
    require_nonneg(x, "bessel_i_scaled");
    const int n = order.value();
    if (x == 0.0) {
        return {n == 0 ? 1.0 : 0.0, 0.0, true};
    }
    if (x <= kSeriesLimit) {
        return {i_series(n, x) * std::exp(-x), x, true};
    }
    return {i_scaled_miller(n, x), x, true};
}

double bessel_i(BesselOrder order, double x) {
    require_nonneg(x, "bessel_i");
    if (x <= kSeriesLimit) {
        return i_series(order.value(), x);
    }
    const ScaledValue s = bessel_i_scaled(order, x);
    if (x + std::log(s.mantissa) > kLogMax) {
        throw OverflowError("bessel_i: I_" + std::to_string(order.value()) + "(" +
                            std::to_string(x) + ") overflows; use bessel_i_scaled");
    }
    return s.unscaled();
}

ScaledValue bessel_k_scaled(BesselOrder order, double x) {
    require_positive(x, "bessel_k_scaled");
    const int n = order.value();
    if (x <= kSeriesLimit) {
        const auto [k0, k1] = k01_series(x);
        return {k_upward(n, x, k0, k1) * std::exp(x), -x, true};
    }
    const auto [k0, k1] = k01_scaled_cf(x);
    return {k_upward(n, x, k0, k1), -x, true};
}

double bessel_k(BesselOrder order, double x) {
    require_positive(x, "bessel_k");
    const int n = order.value();
    if (x <= kSeriesLimit) {
        const auto [k0, k1] = k01_series(x);
        return k_upward(n, x, k0, k1);
    }
    return bessel_k_scaled(order, x).unscaled();
}

std::complex<double> complex_bessel_j_series(BesselOrder order, std::complex<double> z) {
    if (!(std::abs(z) <= kComplexSeriesWindow)) {
        throw AccuracyError("complex_bessel_j_series: |z| = " + std::to_string(std::abs(z)) +
                            " outside the series window");
    }
    const int n = order.value();
    const std::complex<double> half = 0.5 * z;
    std::complex<double> term = 1.0;
    for (int k = 1; k <= n; ++k) {
        term *= half / static_cast<double>(k);
    }
    const std::complex<double> w = -half * half;
    std::complex<double> sum = term;
    const double half_abs = std::abs(half);
    for (int k = 1; k < 1000; ++k) {
        term *= w / (static_cast<double>(k) * (k + n));
        sum += term;
        if (k > half_abs && std::abs(term) <= kEps * 1e-2 * std::abs(sum)) {
            break;
        }
    }
    return sum;
}

}  // namespace dshell::specfun
