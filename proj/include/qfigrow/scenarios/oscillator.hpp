// oscillator.hpp - damped-oscillator models, Fock-space states, bound constants.

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "../core/complex_matrix.hpp"
#include "../core/density.hpp"
#include "../core/matrix_exp.hpp"
#include "../bounds/curves.hpp"
#include "../bounds/span.hpp"
#include "../dynamics/model.hpp"
#include "../fisher/sld.hpp"

namespace qfigrow {

inline Cmat annihilation(std::size_t n_max) {
    Cmat a(n_max, n_max);
    for (std::size_t n = 1; n < n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

inline Cmat number_operator(std::size_t n_max) {
    Cmat n(n_max, n_max);
    for (std::size_t k = 0; k < n_max; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

// x~ = (a + a^dag)/sqrt(2) rotated by phase phi; phi = pi/2 gives p~.
inline Cmat quadrature(std::size_t n_max, double phi = 0.0) {
    const Cmat a = annihilation(n_max);
    const cplx w = std::exp(cplx{0.0, -phi}) / std::sqrt(2.0);
    return a * w + a.adjoint() * std::conj(w);
}

inline Cmat displacement_operator(std::size_t n_max, cplx alpha) {
    const Cmat a = annihilation(n_max);
    return matrix_exp(a.adjoint() * alpha - a * std::conj(alpha));
}

// S(r) = exp(r/2 (a^2 - a^dag^2)); r > 0 amplifies the p~ variance.
inline Cmat squeeze_operator(std::size_t n_max, double r) {
    const Cmat a = annihilation(n_max);
    Cmat gen = a * a - a.adjoint() * a.adjoint();
    gen *= cplx{0.5 * r, 0.0};
    return matrix_exp(gen);
}

enum class StateKind { coherent, fock, squeezed_coherent, ground };

struct StateSpec {
    StateKind kind = StateKind::ground;
    cplx amplitude{0.0, 0.0};
    int n = 0;
    double squeeze = 1.0;  // variance amplification G_s >= 1
};

namespace detail {

inline void check_truncation_safety(const StateSpec& spec, std::size_t n_max) {
    const double mag = std::abs(spec.amplitude);
    switch (spec.kind) {
        case StateKind::coherent:
        case StateKind::squeezed_coherent:
            if (mag * mag + 6.0 * mag + 10.0 > static_cast<double>(n_max))
                throw std::invalid_argument("make_state: amplitude too large for the cutoff");
            break;
        case StateKind::fock:
            if (spec.n < 0 || static_cast<std::size_t>(spec.n) + 6 > n_max)
                throw std::invalid_argument("make_state: Fock index too large for the cutoff");
            break;
        case StateKind::ground:
            break;
    }
    if (spec.squeeze < 1.0) throw std::invalid_argument("make_state: squeeze factor below 1");
}

inline void normalize_column(Cmat& psi) {
    double nrm2 = 0.0;
    for (std::size_t i = 0; i < psi.rows(); ++i) nrm2 += std::norm(psi(i, 0));
    if (nrm2 <= 0.0) throw std::runtime_error("make_state: zero norm after truncation");
    psi *= cplx{1.0 / std::sqrt(nrm2), 0.0};
}

}  // namespace detail

inline Cmat make_state_vector(const StateSpec& spec, std::size_t n_max) {
    if (n_max < 8) throw std::invalid_argument("make_state: cutoff below 8");
    detail::check_truncation_safety(spec, n_max);
    Cmat psi(n_max, 1);
    switch (spec.kind) {
        case StateKind::ground:
            psi(0, 0) = 1.0;
            break;
        case StateKind::fock:
            psi(static_cast<std::size_t>(spec.n), 0) = 1.0;
            break;
        case StateKind::coherent: {
            cplx term = 1.0;
            psi(0, 0) = term;
            for (std::size_t k = 1; k < n_max; ++k) {
                term *= spec.amplitude / std::sqrt(static_cast<double>(k));
                psi(k, 0) = term;
            }
            break;
        }
        case StateKind::squeezed_coherent: {
            Cmat vac(n_max, 1);
            vac(0, 0) = 1.0;
            const double r = 0.5 * std::log(spec.squeeze);
            psi = displacement_operator(n_max, spec.amplitude) *
                  (squeeze_operator(n_max, r) * vac);
            break;
        }
    }
    detail::normalize_column(psi);
    return psi;
}

inline Cmat make_state(const StateSpec& spec, std::size_t n_max) {
    return pure_density(make_state_vector(spec, n_max));
}

enum class ForcingKind { linear, quadratic, two_photon };

// The amplitude field is interpreted per forcing kind: linear uses it as the
// complex drive epsilon in H' = i epsilon a^dag + h.c., quadratic uses its real
// part as omega_f in H' = omega_f N, two_photon as f in H' = f a^2 + h.c.
struct OscillatorSpec {
    std::size_t n_max = 40;
    double gamma = 1.0;
    double n_T = 0.0;
    cplx epsilon{1.0, 0.0};
    double detuning = 0.0;
    ForcingKind forcing_kind = ForcingKind::linear;
    double extra_damping = 0.0;
    double extra_damping_on_time = 0.0;

    void validate() const {
        if (n_max < 8) throw std::invalid_argument("OscillatorSpec: n_max must be at least 8");
        if (gamma < 0.0 || n_T < 0.0 || extra_damping < 0.0)
            throw std::invalid_argument("OscillatorSpec: negative rate");
    }
};

inline Cmat forcing_generator(const OscillatorSpec& spec) {
    const Cmat a = annihilation(spec.n_max);
    switch (spec.forcing_kind) {
        case ForcingKind::linear:
            return a.adjoint() * (kI * spec.epsilon) - a * (kI * std::conj(spec.epsilon));
        case ForcingKind::quadratic: {
            Cmat n = number_operator(spec.n_max);
            n *= cplx{spec.epsilon.real(), 0.0};
            return n;
        }
        case ForcingKind::two_photon: {
            const Cmat a2 = a * a;
            return a2 * spec.epsilon + a2.adjoint() * std::conj(spec.epsilon);
        }
    }
    throw std::logic_error("forcing_generator: unknown kind");
}

// H = detuning N + g H_f; channels sqrt(gamma (n_T+1)) a and sqrt(gamma n_T) a^dag,
// plus an optional accessible readout channel sqrt(extra_damping) a switched on
// at extra_damping_on_time. The nominal parameter value g is not baked into the
// model (all maps take g explicitly); it is accepted for signature symmetry.
namespace detail {

inline void append_damping_channels(ParamModel& m, const OscillatorSpec& spec) {
    const Cmat a = annihilation(spec.n_max);
    if (spec.gamma > 0.0) {
        Cmat l1 = a;
        l1 *= cplx{std::sqrt(spec.gamma * (spec.n_T + 1.0)), 0.0};
        m.lindblads.push_back([l1](double, double) { return l1; });
        if (spec.n_T > 0.0) {
            Cmat l2 = a.adjoint();
            l2 *= cplx{std::sqrt(spec.gamma * spec.n_T), 0.0};
            m.lindblads.push_back([l2](double, double) { return l2; });
        }
    }
    if (spec.extra_damping > 0.0) {
        Cmat le = a;
        le *= cplx{std::sqrt(spec.extra_damping), 0.0};
        const double on_time = spec.extra_damping_on_time;
        if (on_time > 0.0) {
            m.time_dependent = true;
            const std::size_t n = spec.n_max;
            m.lindblads.push_back(
                [le, on_time, n](double t, double) { return t >= on_time ? le : Cmat(n, n); });
        } else {
            m.lindblads.push_back([le](double, double) { return le; });
        }
    }
}

}  // namespace detail

inline ParamModel damped_oscillator(const OscillatorSpec& spec, double /*g*/ = 0.0) {
    spec.validate();
    ParamModel m;
    m.dim = spec.n_max;
    m.monitor_top_levels = true;

    const Cmat hf = forcing_generator(spec);
    Cmat hn = number_operator(spec.n_max);
    hn *= cplx{spec.detuning, 0.0};
    m.hamiltonian = [hn, hf](double, double g) { return hn + hf * cplx{g, 0.0}; };
    m.hamiltonian_deriv = [hf](double, double) { return hf; };

    detail::append_damping_channels(m, spec);
    return m;
}

// Same physics as damped_oscillator, written in the frame co-rotating with the
// detuning. The number rotation commutes with photon loss, so at g = 0 the
// state undergoes pure damping and the detuning survives only as the phase
// exp(i * detuning * (j - k) * t) on element (j, k) of the forcing. QFI values
// agree with the lab-frame model point by point (the frames differ by a
// g-independent unitary), but the integrator no longer has to resolve number
// rotation at frequency detuning * n_max, which dominates the step budget for
// wide sweeps.
//
// phase_reference shifts the time origin of the forcing phase. Preparing the
// probe with its squeezing axis referenced to t = phase_reference is the same
// protocol as shifting the drive phase, and choosing the midpoint of a
// measurement window keeps the accumulated signal on the quadrature it probes
// at preparation time instead of letting it rotate across the window.
inline ParamModel rotating_frame_oscillator(const OscillatorSpec& spec,
                                            double phase_reference = 0.0) {
    spec.validate();
    ParamModel m;
    m.dim = spec.n_max;
    m.monitor_top_levels = true;
    m.time_dependent = spec.detuning != 0.0;

    const Cmat hf = forcing_generator(spec);
    const double delta = spec.detuning;
    const double t_ref = phase_reference;
    const std::size_t n = spec.n_max;
    auto rotated_forcing = [hf, delta, t_ref, n](double t) {
        Cmat h(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const cplx v = hf(j, k);
                if (v != cplx{0.0, 0.0}) {
                    const double phase =
                        delta * (static_cast<double>(j) - static_cast<double>(k)) * (t - t_ref);
                    h(j, k) = v * cplx{std::cos(phase), std::sin(phase)};
                }
            }
        return h;
    };
    m.hamiltonian = [rotated_forcing](double t, double g) {
        Cmat h = rotated_forcing(t);
        h *= cplx{g, 0.0};
        return h;
    };
    m.hamiltonian_deriv = [rotated_forcing](double t, double) { return rotated_forcing(t); };

    detail::append_damping_channels(m, spec);
    return m;
}

// F(t) = 16 |epsilon|^2 / gamma^2 (1 - e^{-gamma t/2})^2, the exact QFI of the
// n_T = 0 linear-forcing trajectory from any coherent start.
inline double analytic_coherent_qfi(cplx epsilon, double gamma, double t) {
    if (!(gamma > 0.0)) throw std::invalid_argument("analytic_coherent_qfi: gamma must be positive");
    const double mag2 = std::norm(epsilon);
    const double base = 1.0 - std::exp(-0.5 * gamma * t);
    return 16.0 * mag2 / (gamma * gamma) * base * base;
}

// Bound constants for the state and forcing at hand. Linear forcing measures
// the variance of the quadrature conjugate to the drive; quadratic forcing uses
// photon-number moments; two-photon forcing falls outside the span and takes
// its constants from the projection residual.
inline BoundConstants oscillator_constants(const OscillatorSpec& spec, const Cmat& state) {
    spec.validate();
    check_density(state);
    BoundConstants c;
    const double gamma_total = spec.gamma * (2.0 * spec.n_T + 1.0);
    switch (spec.forcing_kind) {
        case ForcingKind::linear: {
            const double mag2 = std::norm(spec.epsilon);
            const Cmat p_conj = quadrature(spec.n_max, std::arg(spec.epsilon) + std::numbers::pi / 2.0);
            const double var = variance(state, p_conj);
            c.c1 = std::sqrt(2.0 * mag2 * var);
            c.c2 = mag2 / gamma_total;
            break;
        }
        case ForcingKind::quadratic: {
            const double wf = spec.epsilon.real();
            const Cmat n_op = number_operator(spec.n_max);
            const double nbar = expectation_real(state, n_op);
            c.c1 = std::abs(wf) * std::sqrt(std::max(variance(state, n_op), 0.0));
            c.c2 = wf * wf * nbar / spec.gamma;
            break;
        }
        case ForcingKind::two_photon: {
            const Cmat hf = forcing_generator(spec);
            std::vector<Cmat> ls;
            const Cmat a = annihilation(spec.n_max);
            if (spec.gamma > 0.0) {
                Cmat l1 = a;
                l1 *= cplx{std::sqrt(spec.gamma * (spec.n_T + 1.0)), 0.0};
                ls.push_back(l1);
                if (spec.n_T > 0.0) {
                    Cmat l2 = a.adjoint();
                    l2 *= cplx{std::sqrt(spec.gamma * spec.n_T), 0.0};
                    ls.push_back(l2);
                }
            }
            const auto proj = project_to_span(hf, ls);
            c.c0 = std::sqrt(std::max(variance(state, proj.G0), 0.0));
            c.c1 = std::sqrt(std::max(variance(state, hf), 0.0));
            double acc = 0.0;
            const auto decomp = build_decomposition(hf, ls, proj.coefficients.alpha,
                                                    proj.coefficients.beta, proj.coefficients.gamma);
            for (const auto& aop : decomp.A_ops)
                acc += expectation_real(state, aop.adjoint() * aop);
            c.c2 = std::max(acc, 0.0);
            break;
        }
    }
    if (c.c1 < c.c0) c.c1 = c.c0;  // variance estimates can cross by roundoff
    if (c.c0 > 0.0 && c.c1 > c.c0 && c.c2 > 0.0)
        c.t_c = hnls_tc(c.c0, c.c1, c.c2);
    else if (c.c0 == 0.0 && c.c1 > 0.0)
        c.t_c = hls_tc(c.c1, c.c2);
    c.validate();
    return c;
}

// Quadrature-variance cap sigma_p~^2 <= 1/2 + N + sqrt(N (N+1)) at mean photon
// number N, saturated by the matched squeezed state.
inline double quadrature_variance_cap(double nbar) {
    return 0.5 + nbar + std::sqrt(nbar * (nbar + 1.0));
}

}  // namespace qfigrow
