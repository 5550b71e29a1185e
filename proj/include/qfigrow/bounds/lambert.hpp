// lambert.hpp - lower branch of the Lambert-W function on [-1/e, 0).

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace qfigrow {

namespace detail {

// Branch-point series for W around z = -1/e, lower branch: W = sum a_k p^k
// with p = -sqrt(2(1 + e z)). Used where Halley's denominator degenerates.
inline double lambert_branch_series(double u) {
    // 1 + e z = 1 - e^{-u} for z = -e^{-1-u}.
    const double p = -std::sqrt(2.0 * (-std::expm1(-u)));
    const double a[7] = {-1.0, 1.0, -1.0 / 3.0, 11.0 / 72.0, -43.0 / 540.0, 769.0 / 17280.0,
                         -221.0 / 8505.0};
    double w = 0.0;
    double pk = 1.0;
    for (int k = 0; k < 7; ++k) {
        w += a[k] * pk;
        pk *= p;
    }
    return w;
}

}  // namespace detail

// W_{-1}(x): the real solution w <= -1 of w e^w = x, for x in [-1/e, 0).
// Seeded from the sandwich -(1 + sqrt(2u) + u) <= W <= -(1 + sqrt(2u) + 2u/3)
// at x = -e^{-1-u}, refined by Halley iteration, with a bisection fallback on
// the monotone form w + ln(-w) = ln(-x) inside the same bracket.
inline double lambert_w_m1(double x) {
    const double branch_point = -std::exp(-1.0);
    if (!(x < 0.0) || x < branch_point - 1e-15)
        throw std::invalid_argument("lambert_w_m1: argument " + std::to_string(x) +
                                    " outside [-1/e, 0)");
    if (x <= branch_point) return -1.0;

    const double u = -1.0 - std::log(-x);
    if (u <= 0.0) return -1.0;
    if (u < 1e-4) return detail::lambert_branch_series(u);

    const double root = std::sqrt(2.0 * u);
    const double lo = -(1.0 + root + u);            // lower bracket end (more negative)
    const double hi = -(1.0 + root + 2.0 * u / 3.0);
    double w = 0.5 * (lo + hi);

    bool ok = false;
    for (int it = 0; it < 60; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double fp = (w + 1.0) * ew;
        const double fpp = (w + 2.0) * ew;
        const double denom = fp - 0.5 * f * fpp / fp;
        if (denom == 0.0) break;
        const double step = f / denom;
        w -= step;
        if (std::abs(step) <= 1e-15 * std::abs(w)) {
            ok = true;
            break;
        }
    }
    if (!ok || !(std::abs(w * std::exp(w) - x) <= 1e-12 * std::abs(x))) {
        // Bisection on g(w) = w + ln(-w) - ln(-x), increasing for w < -1.
        double a = lo, b = hi;
        const double target = std::log(-x);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            if (mid + std::log(-mid) - target < 0.0)
                a = mid;
            else
                b = mid;
        }
        w = 0.5 * (a + b);
    }
    return w;
}

// W_{-1}(-e^{-1-u}) for u >= 0 without forming -e^{-1-u}, which underflows to
// -0.0 near u = 708 and loses the argument entirely. Writing w = -v turns
// w e^w = -e^{-1-u} into v - ln v = 1 + u, solved by Newton; the direct branch
// is kept where the exponential is comfortably representable.
inline double lambert_w_m1_exp(double u) {
    if (!(u >= 0.0)) throw std::invalid_argument("lambert_w_m1_exp: negative offset");
    if (u == 0.0) return -1.0;
    if (u <= 600.0) return lambert_w_m1(-std::exp(-1.0 - u));
    double v = 1.0 + u + std::log1p(u);
    for (int it = 0; it < 40; ++it) {
        const double step = (v - std::log(v) - 1.0 - u) / (1.0 - 1.0 / v);
        v -= step;
        if (std::abs(step) <= 1e-15 * v) break;
    }
    return -v;
}

}  // namespace qfigrow
