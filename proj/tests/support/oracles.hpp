// oracles.hpp - Independent reference computations for the test suites.
// Everything here is deliberately implemented off the library's code paths:
// long-double series / adaptive Simpson for erfc, direct fading draws for the
// averaged BER. Keep it that way.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace oracle {

// Maclaurin series for erf in long double; trustworthy for |x| <= 3.
inline long double erf_series_ld(long double x) {
    const long double x2 = x * x;
    long double term = x;
    long double sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -x2 / static_cast<long double>(n);
        const long double contrib = term / static_cast<long double>(2 * n + 1);
        sum += contrib;
        if (std::abs(contrib) < 1e-22L * std::abs(sum)) break;
    }
    return sum * 2.0L / std::sqrt(3.14159265358979323846264338327950288L);
}

namespace detail {

inline long double simpson(long double a, long double b, long double fa, long double fm,
                            long double fb) {
    return (b - a) / 6.0L * (fa + 4.0L * fm + fb);
}

template <typename F>
long double adaptive_simpson(const F& f, long double a, long double b, long double fa,
                             long double fm, long double fb, long double whole, long double eps,
                             int depth) {
    const long double m = 0.5L * (a + b);
    const long double lm = 0.5L * (a + m), rm = 0.5L * (m + b);
    const long double flm = f(lm), frm = f(rm);
    const long double left = simpson(a, m, fa, flm, fm);
    const long double right = simpson(m, b, fm, frm, fb);
    const long double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0L * eps) return left + right + delta / 15.0L;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5L * eps, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5L * eps, depth - 1);
}

}  // namespace detail

template <typename F>
long double integrate_ld(const F& f, long double a, long double b, long double eps = 1e-19L) {
    const long double m = 0.5L * (a + b);
    const long double fa = f(a), fm = f(m), fb = f(b);
    const long double whole = detail::simpson(a, b, fa, fm, fb);
    return detail::adaptive_simpson(f, a, b, fa, fm, fb, whole, eps, 48);
}

// erfc via direct quadrature of its defining integral, long double. The
// window [x, x+L] is sized so the discarded tail is below 1e-26 of the
// result, and the Simpson tolerance is tied to the result's magnitude.
inline long double erfc_quadrature(long double x) {
    if (x < 0.0L) return 2.0L - erfc_quadrature(-x);
    if (x > 26.5L) return 0.0L;
    const long double inv_sqrt_pi = 0.564189583547756286948079451560772586L;
    const auto f = [](long double t) { return std::exp(-t * t); };
    const long double span = -x + std::sqrt(x * x + 64.0L);  // exp(-2xL - L^2) <= 1e-27
    const long double scale = std::exp(-x * x) / (1.0L + x);  // order of erfc(x)
    const long double eps = std::max(1e-24L, 1e-18L * scale);
    return 2.0L * inv_sqrt_pi * integrate_ld(f, x, x + span, eps);
}

// Mean of the conditional BER over explicit exponential path-energy draws;
// berf is the conditional-BER function under test's *mathematical* definition,
// re-evaluated via the caller-supplied callable.
template <typename BerF>
double fading_mc_average(const BerF& berf, double mean_gain_1, double mean_gain_2, double ebn0,
                         std::uint64_t draws, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    auto u01 = [&eng]() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    long double acc = 0.0L;
    for (std::uint64_t i = 0; i < draws; ++i) {
        const double u = -std::log(1.0 - u01()) * mean_gain_1;
        const double v = -std::log(1.0 - u01()) * mean_gain_2;
        acc += berf((u + v) * ebn0);
    }
    return static_cast<double>(acc / static_cast<long double>(draws));
}

}  // namespace oracle
