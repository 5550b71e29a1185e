// Master-equation propagation: exact dephasing solution, integrator order,
// conservation laws, the parameter-derivative equation against finite
// differences, and the guard rails (truncation leakage, positivity).

#include <catch2/catch_amalgamated.hpp>

#include <qfigrow/qfigrow.hpp>

#include <cmath>

using namespace qfigrow;
using Catch::Approx;

namespace {

// Largest deviation of the propagated state from the closed-form dephasing
// solution at unit coupling: diagonal frozen, off-diagonal rotating at 2 eps g
// and decaying at 2 gamma_d.
double dephasing_error(double gamma_d, double g, double step) {
    const ParamModel model = dephasing_qubit(1.0, gamma_d);
    const Cmat rho0 = plus_state_density();
    const Cmat zero(2, 2);
    IntegratorConfig cfg;
    cfg.step = step;
    const std::vector<double> grid = {0.0, 0.5, 1.0, 2.0};
    const auto traj = propagate(model, rho0, zero, g, grid, cfg);
    double worst = 0.0;
    for (const auto& pt : traj) {
        const cplx want = 0.5 * std::exp(cplx{-2.0 * gamma_d * pt.t, -2.0 * g * pt.t});
        worst = std::max(worst, std::abs(pt.rho(0, 1) - want));
    }
    return worst;
}

}  // namespace

TEST_CASE("Dephasing qubit matches the closed-form coherence decay", "[dynamics][exact]") {
    REQUIRE(dephasing_error(0.5, 0.3, 1e-2) <= 1e-8);
    REQUIRE(dephasing_error(1.0, 0.0, 1e-2) <= 1e-8);
}

TEST_CASE("Integrator converges at fourth order", "[dynamics][integrator]") {
    const double e1 = dephasing_error(1.0, 1.0, 4e-2);
    const double e2 = dephasing_error(1.0, 1.0, 2e-2);
    // Halving the step should cut the error by about 2^4; allow a wide band
    // around that to stay robust to rounding.
    REQUIRE(e1 / e2 >= 8.0);
    REQUIRE(e1 / e2 <= 40.0);
}

TEST_CASE("Propagation preserves trace, hermiticity, and positivity", "[dynamics][invariants]") {
    OscillatorSpec spec;
    spec.n_max = 24;
    spec.gamma = 1.0;
    spec.epsilon = {1.0, 0.0};
    const ParamModel model = damped_oscillator(spec);
    const StateSpec coherent{StateKind::coherent, cplx{0.8, 0.2}, 0, 1.0};
    const Cmat rho0 = make_state(coherent, spec.n_max);
    const Cmat zero(spec.n_max, spec.n_max);

    const auto traj = propagate(model, rho0, zero, 0.0, {0.0, 1.0, 2.0, 4.0}, {});
    for (const auto& pt : traj) {
        REQUIRE(pt.rho.trace().real() == Approx(1.0).margin(1e-12));
        REQUIRE(hermiticity_defect(pt.rho) <= 1e-12);
        REQUIRE(min_eigenvalue(pt.rho) >= -1e-10);
        REQUIRE(pt.rho_prime.trace().real() == Approx(0.0).margin(1e-12));
        // Damping from a coherent start keeps the state pure.
        REQUIRE(purity(pt.rho) == Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("Derivative equation matches finite differences of the state", "[dynamics][derivative]") {
    const double g0 = 0.4;
    const double dg = 1e-5;
    const std::vector<double> grid = {0.0, 0.5, 1.0};

    auto check_model = [&](const ParamModel& model, const Cmat& rho0) {
        const Cmat zero(model.dim, model.dim);
        const auto base = propagate(model, rho0, zero, g0, grid, {});
        const auto up = propagate(model, rho0, zero, g0 + dg, grid, {});
        const auto down = propagate(model, rho0, zero, g0 - dg, grid, {});
        for (std::size_t i = 0; i < grid.size(); ++i) {
            Cmat fd = up[i].rho - down[i].rho;
            fd *= cplx{0.5 / dg, 0.0};
            REQUIRE((fd - base[i].rho_prime).max_abs() <= 1e-6);
        }
    };

    SECTION("random constant model") {
        Rng rng(101);
        const ParamModel model = random_constant_model(rng, 3, 2);
        check_model(model, rng.density(3));
    }

    SECTION("noise operators that depend on the parameter") {
        const ParamModel model = dephasing_direction_qubit(1.0, 0.7);
        check_model(model, plus_state_density());
    }
}

TEST_CASE("Model derivative checker accepts shipped models and rejects a wrong one",
          "[dynamics][model]") {
    REQUIRE_NOTHROW(
        check_model_derivatives(dephasing_direction_qubit(1.0, 0.5), {0.0, 1.0}, {0.0, 0.3}));

    ParamModel bad = dephasing_qubit(1.0, 0.5);
    bad.hamiltonian_deriv = [](double, double) {
        Cmat h = pauli_z();
        h *= cplx{2.0, 0.0};  // twice the true slope
        return h;
    };
    REQUIRE_THROWS_AS(check_model_derivatives(bad, {0.0}, {0.1}), std::runtime_error);
}

TEST_CASE("Truncation leakage aborts the run with a cutoff hint", "[dynamics][guards]") {
    OscillatorSpec spec;
    spec.n_max = 8;
    spec.gamma = 0.2;
    spec.epsilon = {1.0, 0.0};
    const ParamModel model = damped_oscillator(spec);
    // Strong drive at finite coupling pushes population into the top levels.
    const StateSpec ground{StateKind::ground, 0.0, 0, 1.0};
    const Cmat rho0 = make_state(ground, spec.n_max);
    const Cmat zero(spec.n_max, spec.n_max);
    REQUIRE_THROWS_WITH(propagate(model, rho0, zero, 3.0, {0.0, 6.0}, {}),
                        Catch::Matchers::ContainsSubstring("increase the cutoff"));
}

TEST_CASE("Positivity guard rejects an invalid initial state", "[dynamics][guards]") {
    Cmat rho(2, 2);
    rho(0, 0) = 1.001;
    rho(1, 1) = -0.001;  // slightly negative eigenvalue
    const Cmat zero(2, 2);
    REQUIRE_THROWS_WITH(propagate(dephasing_qubit(1.0, 0.5), rho, zero, 0.0, {0.0, 0.1}, {}),
                        Catch::Matchers::ContainsSubstring("positivity"));
}

TEST_CASE("Rotating-frame oscillator agrees with the lab frame", "[dynamics][frames]") {
    OscillatorSpec spec;
    spec.n_max = 10;
    spec.gamma = 1.0;
    spec.epsilon = {1.0, 0.0};
    spec.detuning = 3.0;

    const StateSpec ground{StateKind::ground, 0.0, 0, 1.0};
    const Cmat rho0 = make_state(ground, spec.n_max);
    const Cmat zero(spec.n_max, spec.n_max);
    IntegratorConfig cfg;
    cfg.step = 2e-3;  // lab frame has to resolve number rotation at delta * n_max

    const auto lab = propagate(damped_oscillator(spec), rho0, zero, 0.0, {0.0, 0.5, 1.0}, cfg);
    const auto rot =
        propagate(rotating_frame_oscillator(spec), rho0, zero, 0.0, {0.0, 0.5, 1.0}, cfg);
    for (std::size_t i = 0; i < lab.size(); ++i) {
        const double fl = qfi(lab[i].rho, lab[i].rho_prime);
        const double fr = qfi(rot[i].rho, rot[i].rho_prime);
        REQUIRE(fl == Approx(fr).margin(1e-6));
    }
}

TEST_CASE("Detuning sign flip leaves the rotating-frame QFI unchanged", "[dynamics][frames]") {
    OscillatorSpec spec;
    spec.n_max = 12;
    spec.gamma = 1.0;
    spec.epsilon = {1.0, 0.0};

    const StateSpec state{StateKind::squeezed_coherent, 0.0, 0, 4.0};
    const Cmat rho0 = make_state(state, spec.n_max);
    const Cmat zero(spec.n_max, spec.n_max);

    auto qfi_at = [&](double delta) {
        OscillatorSpec s = spec;
        s.detuning = delta;
        const auto traj =
            propagate(rotating_frame_oscillator(s, 0.4), rho0, zero, 0.0, {0.0, 0.8}, {});
        return qfi(traj.back().rho, traj.back().rho_prime);
    };
    // Conjugating every operator in the equation of motion maps delta to
    // -delta and leaves a real initial state fixed.
    const double plus = qfi_at(2.5);
    const double minus = qfi_at(-2.5);
    REQUIRE(plus == Approx(minus).epsilon(1e-12));
}
