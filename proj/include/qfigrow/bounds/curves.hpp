// curves.hpp - closed-form QFI growth envelopes and generic rate-bound integration.

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lambert.hpp"

namespace qfigrow {

// Nonnegative constants of the growth envelopes: c0 bounds sqrt(F_G0/4) of the
// span residual, c1 bounds sqrt(F_H'/4), c2 bounds the accumulated channel
// weight sum <A~_j^dag A~_j>; t_c is the derived crossover time.
struct BoundConstants {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double t_c = 0.0;

    void validate() const {
        if (c0 < 0.0 || c2 < 0.0 || c1 < c0)
            throw std::invalid_argument("BoundConstants: require c1 >= c0 >= 0 and c2 >= 0");
    }
};

enum class CurveFamily {
    hls_piecewise,
    hnls_lambert,
    hnls_simple,
    prior_linear,
    prior_quadratic,
    oscillator,
    integrated
};

struct BoundCurve {
    CurveFamily family = CurveFamily::integrated;
    BoundConstants constants;
    std::function<double(double)> evaluate;
    // Populated by integrate_rate_bound (samples align with its t_grid).
    std::vector<double> grid;
    std::vector<double> samples;
    bool rate_clipped = false;
};

inline double hls_tc(double c1, double c2) {
    if (!(c1 > 0.0)) throw std::invalid_argument("hls_tc: c1 must be positive");
    return 2.0 * c2 * std::log(2.0) / (c1 * c1);
}

// Instantaneous envelope dF/dt <= 4 c1 sqrt(F) (1 - c1 sqrt(F) / (4 c2)),
// capped at the flat value 4 c2 beyond sqrt(F) = 2 c2 / c1.
inline double hls_rate(double c1, double c2, double f) {
    if (c1 < 0.0 || c2 < 0.0) throw std::invalid_argument("hls_rate: negative constants");
    if (f < 0.0) throw std::invalid_argument("hls_rate: negative F");
    if (c1 == 0.0 || c2 == 0.0) return c1 == 0.0 ? 4.0 * c2 : 0.0;
    const double s = std::sqrt(f);
    if (s <= 2.0 * c2 / c1) return 4.0 * c1 * s * (1.0 - c1 * s / (4.0 * c2));
    return 4.0 * c2;
}

inline double hls_curve(double c1, double c2, double t) {
    if (!(c1 > 0.0) || c2 < 0.0) throw std::invalid_argument("hls_curve: bad constants");
    if (t < 0.0) throw std::invalid_argument("hls_curve: negative time");
    if (c2 == 0.0 || t == 0.0) return 0.0;
    const double t_c = hls_tc(c1, c2);
    const double scale = 16.0 * c2 * c2 / (c1 * c1);
    if (t <= t_c) {
        const double base = 1.0 - std::exp2(-t / t_c);
        return scale * base * base;
    }
    return 4.0 * c2 * (c2 / (c1 * c1) + (t - t_c));
}

inline double hnls_tc(double c0, double c1, double c2) {
    BoundConstants{c0, c1, c2, 0.0}.validate();
    if (c0 == 0.0) return hls_tc(c1, c2);
    if (c0 == c1) throw std::invalid_argument("hnls_tc: undefined at c0 = c1");
    const double d = c1 - c0;
    return (2.0 * c2 / (d * d)) * std::log(2.0 * c1 / (c1 + c0));
}

// dF/dt <= 4 c1 sqrt(F) (1 - (c1-c0)^2 sqrt(F) / (4 c1 c2)) up to the
// crossover sqrt(F) = 2 c2/(c1-c0), then 4 (c0 sqrt(F) + c2). The first case
// applies for all F when c0 = c1.
inline double hnls_rate(double c0, double c1, double c2, double f) {
    BoundConstants{c0, c1, c2, 0.0}.validate();
    if (f < 0.0) throw std::invalid_argument("hnls_rate: negative F");
    const double s = std::sqrt(f);
    if (c0 == c1) return 4.0 * c1 * s;
    if (s == 0.0) return 0.0;
    const double d = c1 - c0;
    if (c2 > 0.0 && s <= 2.0 * c2 / d) return 4.0 * c1 * s * (1.0 - d * d * s / (4.0 * c1 * c2));
    return 4.0 * (c0 * s + c2);
}

namespace detail {

// Quadratic-asymptotic tail of the integrated envelope: y(tau) solves the
// post-crossover flow and is expressed through the lower Lambert-W branch.
inline double hnls_tail_sqrt(double c0, double c1, double c2, double tau) {
    const double d = c1 - c0;
    const double u = 2.0 * c0 * c0 * tau / c2 + 2.0 * c0 / d - std::log((c0 + c1) / d);
    return (c2 / c0) * (-lambert_w_m1_exp(u) - 1.0);
}

}  // namespace detail

inline double hnls_curve(double c0, double c1, double c2, double t) {
    BoundConstants{c0, c1, c2, 0.0}.validate();
    if (t < 0.0) throw std::invalid_argument("hnls_curve: negative time");
    if (c0 == 0.0) return hls_curve(c1, c2, t);
    if (c0 == c1 || c2 == 0.0) {
        // Both degenerate cases integrate dF/dt = 4 c sqrt(F) from zero.
        const double c = (c0 == c1) ? c1 : c0;
        return 4.0 * c * c * t * t;
    }
    if (t == 0.0) return 0.0;
    const double t_c = hnls_tc(c0, c1, c2);
    const double d = c1 - c0;
    if (t <= t_c) {
        const double ratio = 2.0 * c1 / (c1 + c0);
        const double base = 1.0 - std::pow(ratio, -t / t_c);
        const double scale = 16.0 * c1 * c1 * c2 * c2 / (d * d * d * d);
        return scale * base * base;
    }
    const double y = detail::hnls_tail_sqrt(c0, c1, c2, t - t_c);
    return y * y;
}

// Weaker closed form with the same large-t scaling: 4 c2 t + 4 t^2 c0 (c0 + 2 sqrt(c2/t)).
inline double hnls_curve_simple(double c0, double c2, double t) {
    if (c0 < 0.0 || c2 < 0.0 || t < 0.0)
        throw std::invalid_argument("hnls_curve_simple: negative input");
    if (t == 0.0) return 0.0;
    return 4.0 * c2 * t + 4.0 * t * t * c0 * (c0 + 2.0 * std::sqrt(c2 / t));
}

enum class PriorKind { linear, quadratic };

inline double prior_curve(PriorKind kind, double constant, double t) {
    if (constant < 0.0) throw std::invalid_argument("prior_curve: negative constant");
    if (t < 0.0) throw std::invalid_argument("prior_curve: negative time");
    return kind == PriorKind::linear ? 4.0 * constant * t : 4.0 * constant * t * t;
}

// 4 sum_j (f_j')^2 <L_j^dag L_j>, the decomposition-free envelope for pure
// magnitude dependence of the noise operators.
inline double lindblad_magnitude_bound(const std::vector<double>& f_prime,
                                       const std::vector<double>& expectations) {
    if (f_prime.size() != expectations.size())
        throw std::invalid_argument("lindblad_magnitude_bound: length mismatch");
    double sum = 0.0;
    for (std::size_t j = 0; j < f_prime.size(); ++j) {
        if (expectations[j] < -1e-12)
            throw std::invalid_argument("lindblad_magnitude_bound: negative expectation");
        sum += f_prime[j] * f_prime[j] * std::max(expectations[j], 0.0);
    }
    return 4.0 * sum;
}

// Convenience factories for plot-ready curves.
inline BoundCurve make_hls_curve(double c1, double c2) {
    BoundCurve c;
    c.family = CurveFamily::hls_piecewise;
    c.constants = {0.0, c1, c2, hls_tc(c1, c2)};
    c.evaluate = [c1, c2](double t) { return hls_curve(c1, c2, t); };
    return c;
}

inline BoundCurve make_hnls_curve(double c0, double c1, double c2) {
    BoundCurve c;
    c.family = CurveFamily::hnls_lambert;
    c.constants = {c0, c1, c2, (c0 == c1) ? 0.0 : hnls_tc(c0, c1, c2)};
    c.evaluate = [c0, c1, c2](double t) { return hnls_curve(c0, c1, c2, t); };
    return c;
}

inline BoundCurve make_prior_curve(PriorKind kind, double constant) {
    BoundCurve c;
    c.family = kind == PriorKind::linear ? CurveFamily::prior_linear : CurveFamily::prior_quadratic;
    c.constants = {0.0, 0.0, kind == PriorKind::linear ? constant : 0.0, 0.0};
    c.evaluate = [kind, constant](double t) { return prior_curve(kind, constant, t); };
    return c;
}

namespace detail {

// One RK4 step of dS/dt = psi(t, S).
template <typename Psi>
inline double rk4_scalar(Psi&& psi, double t, double s, double h) {
    const double k1 = psi(t, s);
    const double k2 = psi(t + 0.5 * h, s + 0.5 * h * k1);
    const double k3 = psi(t + 0.5 * h, s + 0.5 * h * k2);
    const double k4 = psi(t + h, s + h * k3);
    return s + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace detail

// Integrates dF/dt = rate(t, F) upward from F0 along t_grid, returning the
// maximal solution. Internally runs in S = sqrt(F), where rates that vanish
// like sqrt(F) become smooth; a short series seed handles rate(t,0) > 0, whose
// S-flow is singular at the origin. Step-doubling RK4 controls accuracy.
inline BoundCurve integrate_rate_bound(const std::function<double(double, double)>& rate,
                                       double f0, const std::vector<double>& t_grid,
                                       double rel_tol = 1e-10) {
    if (!(rel_tol > 0.0) || rel_tol > 1e-2)
        throw std::invalid_argument("integrate_rate_bound: rel_tol out of range");
    if (t_grid.empty()) throw std::invalid_argument("integrate_rate_bound: empty grid");
    for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
        if (!(t_grid[i + 1] > t_grid[i]))
            throw std::invalid_argument("integrate_rate_bound: grid must increase");
    if (f0 < 0.0) throw std::invalid_argument("integrate_rate_bound: negative F0");

    BoundCurve out;
    out.family = CurveFamily::integrated;
    out.grid = t_grid;
    out.samples.reserve(t_grid.size());

    bool clipped = false;
    auto safe_rate = [&](double t, double f) {
        const double r = rate(t, std::max(f, 0.0));
        if (!(r >= 0.0)) {
            clipped = true;
            return 0.0;
        }
        return r;
    };
    const double s_eps = 1e-9;
    auto psi = [&](double t, double s) {
        const double se = std::max(s, s_eps);
        return safe_rate(t, se * se) / (2.0 * se);
    };

    const double span = t_grid.back() - t_grid.front();
    double t = t_grid.front();
    double s = std::sqrt(f0);
    out.samples.push_back(f0);

    if (s == 0.0 && t_grid.size() >= 2) {
        const double b = safe_rate(t, 0.0);
        if (b > 1e-14) {
            // rate(t,0) > 0: step analytically past the square-root corner.
            const double h0 = std::min(1e-6 * std::max(span, 1.0), 0.5 * (t_grid[1] - t_grid[0]));
            const double sb = std::sqrt(b * h0);
            const double a = (safe_rate(t, sb * sb) - b) / sb;
            const double f_seed =
                b * h0 + (2.0 / 3.0) * a * std::sqrt(b) * std::pow(h0, 1.5) + 0.25 * a * a * h0 * h0;
            s = std::sqrt(std::max(f_seed, 0.0));
            t += h0;
        }
    }

    for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
        const double t_end = t_grid[i + 1];
        double h = std::max(t_end - t, 1e-15);
        while (t < t_end - 1e-14 * std::max(1.0, std::abs(t_end))) {
            h = std::min(h, t_end - t);
            const double one = detail::rk4_scalar(psi, t, s, h);
            const double half = detail::rk4_scalar(psi, t + 0.5 * h,
                                                   detail::rk4_scalar(psi, t, s, 0.5 * h), 0.5 * h);
            const double err = std::abs(half - one) / 15.0;
            const double tol = 1e-14 + rel_tol * std::abs(half);
            if (err <= tol || h <= 1e-12 * std::max(span, 1.0)) {
                s = half + (half - one) / 15.0;
                if (s < 0.0) s = 0.0;
                t += h;
                const double grow = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 2.0;
                h *= std::min(2.0, std::max(0.5, grow));
            } else {
                h *= std::max(0.1, 0.9 * std::pow(tol / err, 0.2));
            }
        }
        t = t_end;
        out.samples.push_back(s * s);
    }

    out.rate_clipped = clipped;
    const std::vector<double> grid = out.grid;
    const std::vector<double> samples = out.samples;
    out.evaluate = [grid, samples](double tq) {
        if (tq <= grid.front()) return samples.front();
        if (tq >= grid.back()) return samples.back();
        std::size_t lo = 0, hi = grid.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (grid[mid] <= tq ? lo : hi) = mid;
        }
        const double w = (tq - grid[lo]) / (grid[hi] - grid[lo]);
        return (1.0 - w) * samples[lo] + w * samples[hi];
    };
    return out;
}

}  // namespace qfigrow
