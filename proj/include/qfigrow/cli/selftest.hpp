// selftest.hpp - built-in property suites, one named group per module family.
// The continuity group doubles as the probe for rank-tolerance misconfiguration:
// a fat rank_tol either trips the kernel-consistency error or shows up as a
// grid-refinement jump in the QFI.

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "../bounds/curves.hpp"
#include "../bounds/lambert.hpp"
#include "../bounds/rate_bound.hpp"
#include "../core/matrix_exp.hpp"
#include "../core/random_gen.hpp"
#include "../dynamics/propagate.hpp"
#include "../dynamics/random_model.hpp"
#include "../fisher/rates.hpp"
#include "../fisher/sld.hpp"
#include "../scenarios/oscillator.hpp"
#include "../scenarios/qubit.hpp"

namespace qfigrow {

struct SelftestOptions {
    double rank_tol = kDefaultRankTol;
    unsigned long long seed = 7;
};

namespace detail {

struct Checker {
    std::vector<std::string> failures;

    void require(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    void require_close(double got, double want, double tol, const std::string& what) {
        if (!(std::abs(got - want) <= tol)) {
            std::ostringstream os;
            os << what << ": got " << got << ", want " << want << " (tol " << tol << ")";
            failures.push_back(os.str());
        }
    }
};

}  // namespace detail

// Largest pointwise QFI change of a damped Fock-2 trajectory when the
// integrator step is halved twice, on a fixed output grid. The trajectory
// passes through states with eigenvalues at and near zero; a continuous QFI
// leaves only the integrator's own convergence error, while mishandled
// kernel crossings show up as an order-one jump that refinement cannot
// shrink.
inline double qfi_refinement_jump(double rank_tol, double step_base = 0.04) {
    OscillatorSpec spec;
    spec.n_max = 14;
    spec.gamma = 1.0;
    spec.epsilon = 1.0;
    const Cmat rho0 = make_state({StateKind::fock, 0.0, 2, 1.0}, spec.n_max);
    const Cmat zero(spec.n_max, spec.n_max);
    const ParamModel model = damped_oscillator(spec);

    std::vector<double> out_grid;
    for (double t = 0.25; t <= 3.5 + 1e-12; t += step_base) out_grid.push_back(t);

    auto curve_at = [&](double step) {
        IntegratorConfig config;
        config.step = step;
        auto traj = propagate(model, rho0, zero, 0.0, out_grid, config);
        std::vector<double> f;
        f.reserve(traj.size());
        for (const auto& pt : traj) f.push_back(qfi(pt.rho, pt.rho_prime, rank_tol));
        return f;
    };

    const auto half = curve_at(step_base / 2.0);
    const auto quarter = curve_at(step_base / 4.0);
    double jump = 0.0;
    for (std::size_t i = 0; i < half.size(); ++i)
        jump = std::max(jump, std::abs(quarter[i] - half[i]));
    return jump;
}

namespace detail {

inline Checker selftest_matrix_algebra(unsigned long long seed) {
    Checker c;
    const Cmat comm = commutator(pauli_x(), pauli_y()) - pauli_z() * cplx{0.0, 2.0};
    c.require(comm.max_abs() <= 1e-14, "[sx, sy] != 2i sz");

    Rng rng(seed);
    const Cmat h = rng.hermitian(6);
    const auto eig = eig_hermitian(h);
    Cmat rebuilt(6, 6);
    for (std::size_t k = 0; k < 6; ++k)
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j)
                rebuilt(i, j) += eig.vectors(i, k) * eig.eigenvalues[k] * std::conj(eig.vectors(j, k));
    c.require((rebuilt - h).frobenius_norm() <= 1e-10 * h.frobenius_norm(),
              "eigendecomposition does not rebuild a random Hermitian matrix");

    Cmat gen = pauli_x();
    gen *= cplx{0.0, std::numbers::pi / 2.0};
    const Cmat exp_gen = matrix_exp(gen) - pauli_x() * cplx{0.0, 1.0};
    c.require(exp_gen.max_abs() <= 1e-12, "exp(i pi sx / 2) != i sx");

    const Cmat a = rng.gaussian_matrix(5, 5);
    const auto basis = eig_hermitian(rng.hermitian(5));
    const Cmat rotated = basis.vectors.adjoint() * (a * basis.vectors);
    c.require(std::abs(operator_norm(a) - operator_norm(rotated)) <= 1e-10 * operator_norm(a),
              "operator norm not unitarily invariant");
    return c;
}

inline Checker selftest_dynamics(unsigned long long seed) {
    Checker c;
    const ParamModel qubit = dephasing_qubit(1.0, 1.0);
    const Cmat rho0 = plus_state_density();
    const Cmat zero2(2, 2);
    std::vector<double> grid{0.0, 0.5, 1.0};
    auto traj = propagate(qubit, rho0, zero2, 0.0, grid);
    c.require_close(traj.back().rho.trace().real(), 1.0, 1e-12, "trace drift at t=1");
    c.require_close(traj.back().rho(0, 1).real(), 0.5 * std::exp(-2.0), 1e-8,
                    "dephasing off-diagonal decay");
    c.require(purity(traj.back().rho) <= purity(traj.front().rho) + 1e-12,
              "purity increased under dephasing");

    Rng rng(seed);
    ParamModel random = random_constant_model(rng, 3, 2);
    const Cmat start = rng.density(3);
    const Cmat zero3(3, 3);
    std::vector<double> short_grid{0.0, 0.4, 0.8};
    auto direct = propagate(random, start, zero3, 0.2, short_grid);
    auto fd = fd_rho_prime(random, start, 0.2, 1e-4, short_grid);
    c.require((direct.back().rho_prime - fd.back()).max_abs() <= 1e-6,
              "propagated rho' disagrees with finite differences");
    return c;
}

inline Checker selftest_sld_facts(unsigned long long seed) {
    Checker c;
    Rng rng(seed);
    for (int trial = 0; trial < 40 && c.failures.size() < 4; ++trial) {
        const std::size_t n = 2 + trial % 4;
        const Cmat rho = (trial % 3 == 0) ? pure_density(rng.state(n)) : rng.density(n);
        const Cmat a = rng.hermitian(n);
        const Cmat b = rng.hermitian(n);
        const double fa = qfi_wrt_operator(rho, a);
        const double fb = qfi_wrt_operator(rho, b);

        const double scale = 0.5 + rng.uniform();
        Cmat scaled = a;
        scaled *= cplx{scale, 0.0};
        Cmat shifted = scaled + Cmat::identity(n) * cplx{rng.normal(), 0.0};
        c.require(std::abs(qfi_wrt_operator(rho, shifted) - scale * scale * fa) <=
                      1e-9 * (1.0 + scale * scale * fa),
                  "scaling/shift identity violated at trial " + std::to_string(trial));

        const double var = variance(rho, a);
        c.require(fa <= 4.0 * var + 1e-8,
                  "variance cap violated at trial " + std::to_string(trial));
        if (trial % 3 == 0)
            c.require(std::abs(fa - 4.0 * var) <= 1e-8 * (1.0 + fa),
                      "pure-state equality violated at trial " + std::to_string(trial));

        const double fab = qfi_wrt_operator(rho, a + b);
        c.require(std::sqrt(fab) <= std::sqrt(fa) + std::sqrt(fb) + 1e-8,
                  "triangle inequality violated at trial " + std::to_string(trial));
    }
    return c;
}

inline Checker selftest_lambert() {
    Checker c;
    const double e_inv = std::exp(-1.0);
    for (int i = 0; i < 200; ++i) {
        const double f = (i + 0.5) / 200.0;
        const double x = -std::exp(std::log(e_inv - 1e-15) * (1.0 - f) + std::log(1e-8) * f);
        const double w = lambert_w_m1(x);
        c.require(std::abs(w * std::exp(w) - x) <= 1e-12 * std::abs(x),
                  "branch residual too large at x = " + std::to_string(x));
    }
    for (int i = 0; i <= 60; ++i) {
        const double u = 0.1 + (10.0 - 0.1) * i / 60.0;
        const double neg_w = -lambert_w_m1(-std::exp(-1.0 - u));
        const double lo = 1.0 + std::sqrt(2.0 * u) + (2.0 / 3.0) * u;
        const double hi = 1.0 + std::sqrt(2.0 * u) + u;
        c.require(lo <= neg_w + 1e-12 && neg_w <= hi + 1e-12,
                  "sandwich violated at u = " + std::to_string(u));
    }
    return c;
}

inline Checker selftest_curves() {
    Checker c;
    const double tc = 2.0 * std::log(2.0);
    c.require_close(hls_curve(1.0, 1.0, tc), 4.0, 1e-12, "crossover value");
    c.require_close(hls_curve(1.0, 1.0, tc + 1e-12) - hls_curve(1.0, 1.0, tc - 1e-12), 0.0, 1e-9,
                    "piecewise curve not continuous at t_c");

    const double tch = hnls_tc(0.5, 1.0, 1.0);
    c.require_close(
        hnls_curve(0.5, 1.0, 1.0, tch + 1e-12) - hnls_curve(0.5, 1.0, 1.0, tch - 1e-12), 0.0,
        1e-8, "two-branch curve not continuous at t_c");

    for (int i = 1; i <= 20; ++i) {
        const double t = 0.35 * i;
        c.require(std::abs(hnls_curve(0.0, 1.3, 0.8, t) - hls_curve(1.3, 0.8, t)) <=
                      1e-10 * (1.0 + hls_curve(1.3, 0.8, t)),
                  "c0 = 0 reduction fails at t = " + std::to_string(t));
    }
    c.require_close(hnls_curve_simple(1.0, 1.0, 1.0), 16.0, 1e-12, "simple curve value");
    return c;
}

inline Checker selftest_continuity(double rank_tol) {
    Checker c;
    try {
        const double jump = qfi_refinement_jump(rank_tol);
        c.require(jump < 1e-4, "refinement jump " + std::to_string(jump) + " at rank_tol " +
                                   std::to_string(rank_tol));
    } catch (const std::exception& e) {
        c.failures.push_back(std::string("trajectory QFI rejected: ") + e.what());
    }
    return c;
}

inline Checker selftest_dominance(unsigned long long seed) {
    Checker c;
    Rng rng(seed);
    for (int trial = 0; trial < 4; ++trial) {
        ParamModel model = random_constant_model(rng, 3, 1 + trial % 2);
        const Cmat rho0 = rng.density(3);
        const Cmat zero(3, 3);
        std::vector<double> grid;
        for (int i = 0; i <= 10; ++i) grid.push_back(0.15 * i);
        auto traj = propagate(model, rho0, zero, 0.0, grid);
        annotate_trajectory(traj, model, 0.0);
        for (const auto& pt : traj) {
            const auto opt = optimize_rate_bound(pt.rho, pt.qfi, model.hamiltonian_deriv(pt.t, 0.0),
                                                 detail::OpSet::at(model, pt.t, 0.0).L);
            c.require(pt.qfi_rate <= opt.bound + 1e-6,
                      "rate exceeds optimized bound at trial " + std::to_string(trial) + ", t = " +
                          std::to_string(pt.t));
        }
    }
    return c;
}

}  // namespace detail

// Runs every group, printing one pass/fail line each; returns true iff all passed.
inline bool run_selftest(const SelftestOptions& opts, std::ostream& out) {
    struct Group {
        const char* name;
        std::function<detail::Checker()> run;
    };
    const std::vector<Group> groups = {
        {"matrix-algebra", [&] { return detail::selftest_matrix_algebra(opts.seed); }},
        {"dynamics-invariants", [&] { return detail::selftest_dynamics(opts.seed + 1); }},
        {"sld-facts", [&] { return detail::selftest_sld_facts(opts.seed + 2); }},
        {"lambert-branch", [] { return detail::selftest_lambert(); }},
        {"bound-curves", [] { return detail::selftest_curves(); }},
        {"qfi-continuity", [&] { return detail::selftest_continuity(opts.rank_tol); }},
        {"rate-dominance", [&] { return detail::selftest_dominance(opts.seed + 3); }},
    };

    bool all_ok = true;
    for (const auto& g : groups) {
        detail::Checker c;
        try {
            c = g.run();
        } catch (const std::exception& e) {
            c.failures.push_back(std::string("unexpected error: ") + e.what());
        }
        if (c.failures.empty()) {
            out << "PASS " << g.name << "\n";
        } else {
            all_ok = false;
            out << "FAIL " << g.name << "\n";
            for (const auto& f : c.failures) out << "  - " << f << "\n";
        }
    }
    out << (all_ok ? "selftest: all groups passed\n" : "selftest: FAILURES present\n");
    return all_ok;
}

}  // namespace qfigrow
