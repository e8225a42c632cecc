// quadrature.hpp - Adaptive Gauss-Kronrod (G7, K15) integration on a finite
// interval. Worst-interval bisection until the summed error estimate meets
// the requested relative tolerance.

#pragma once

#include <cmath>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace dcsk {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// QUADPACK 15-point Kronrod abscissae/weights and embedded 7-point Gauss
// weights on [-1, 1]; node i = +/- kXgk[i].
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <typename F>
void kronrod15(const F& f, double a, double b, double& result, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    fv[7] = f(c);
    double kron = kWgk[7] * fv[7];
    double gauss = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        kron += kWgk[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) gauss += kWg[i / 2] * (fv[i] + fv[14 - i]);
    }
    result = kron * h;
    err = std::abs((kron - gauss) * h);
}

struct Interval {
    double a, b, value, err;
    bool operator<(const Interval& o) const { return err < o.err; }
};

}  // namespace detail

// Integrate f over [a, b]; stops when the global error estimate drops below
// max(rel_tol * |integral|, abs_floor). Throws QuadratureError with
// diagnostics if max_subdivisions bisections do not converge.
template <typename F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-10,
                 double abs_floor = 1e-300, std::size_t max_subdivisions = 4000) {
    if (!(b > a)) {
        if (b == a) return 0.0;
        throw std::invalid_argument("integrate: requires b >= a");
    }
    std::priority_queue<detail::Interval> heap;
    detail::Interval whole{a, b, 0.0, 0.0};
    detail::kronrod15(f, a, b, whole.value, whole.err);
    heap.push(whole);
    double total = whole.value;
    double total_err = whole.err;
    for (std::size_t it = 0; it < max_subdivisions; ++it) {
        if (total_err <= std::max(rel_tol * std::abs(total), abs_floor)) return total;
        detail::Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        detail::Interval left{worst.a, mid, 0.0, 0.0};
        detail::Interval right{mid, worst.b, 0.0, 0.0};
        detail::kronrod15(f, left.a, left.b, left.value, left.err);
        detail::kronrod15(f, right.a, right.b, right.value, right.err);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }
    throw QuadratureError("integrate: no convergence after " + std::to_string(max_subdivisions) +
                          " subdivisions; estimate=" + std::to_string(total) +
                          " error=" + std::to_string(total_err));
}

}  // namespace dcsk
