// SLD construction, QFI, QFI with respect to a generator, growth rates, and
// classical Fisher information.

#include <catch2/catch_amalgamated.hpp>

#include <qfigrow/qfigrow.hpp>

#include <cmath>

using namespace qfigrow;
using Catch::Approx;

TEST_CASE("SLD solves the defining equation on a known pair", "[fisher][sld]") {
    Cmat rho(2, 2);
    rho(0, 0) = 0.75;
    rho(1, 1) = 0.25;
    Cmat rho_prime = pauli_x();
    rho_prime *= cplx{0.125, 0.0};

    const SLD sld = solve_sld(rho, rho_prime);
    Cmat want = pauli_x();
    want *= cplx{0.25, 0.0};
    REQUIRE((sld.operator_matrix - want).max_abs() <= 1e-12);
    REQUIRE(sld.kernel_dim == 0);

    Cmat resid = rho * sld.operator_matrix + sld.operator_matrix * rho - rho_prime * cplx{2.0, 0.0};
    REQUIRE(resid.max_abs() <= 1e-12);
}

TEST_CASE("SLD defining equation holds on random full-rank pairs", "[fisher][sld]") {
    Rng rng(71);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const Cmat rho = rng.density(n);
        Cmat rho_prime = rng.hermitian(n);
        // A physical derivative is traceless.
        Cmat shift = Cmat::identity(n);
        shift *= cplx{rho_prime.trace().real() / static_cast<double>(n), 0.0};
        rho_prime -= shift;

        const SLD sld = solve_sld(rho, rho_prime);
        Cmat resid =
            rho * sld.operator_matrix + sld.operator_matrix * rho - rho_prime * cplx{2.0, 0.0};
        REQUIRE(resid.max_abs() <= 1e-8);
        REQUIRE(qfi(rho, rho_prime) >= 0.0);
    }
}

TEST_CASE("Pure states give SLD = 2 rho_prime", "[fisher][sld]") {
    Rng rng(73);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + trial % 4;
        const Cmat rho = pure_density(rng.state(n));
        // i[rho, H] is a valid derivative of a unitary family through rho.
        const Cmat h = rng.hermitian(n);
        Cmat rho_prime = commutator(rho, h);
        rho_prime *= kI;
        rho_prime = hermitize(rho_prime);

        const SLD sld = solve_sld(rho, rho_prime);
        Cmat want = rho_prime;
        want *= cplx{2.0, 0.0};
        REQUIRE((sld.operator_matrix - want).max_abs() <= 1e-8);
        REQUIRE(sld.kernel_dim > 0);
    }
}

TEST_CASE("Zero derivative gives zero SLD and zero QFI", "[fisher][sld]") {
    Rng rng(79);
    const Cmat rho = rng.density(3);
    const Cmat zero(3, 3);
    REQUIRE(solve_sld(rho, zero).operator_matrix.max_abs() == 0.0);
    REQUIRE(qfi(rho, zero) == 0.0);
}

TEST_CASE("Derivative weight on the state kernel is rejected", "[fisher][sld]") {
    Cmat rho(2, 2);
    rho(0, 0) = 1.0;  // pure |0><0|, kernel along |1>
    Cmat rho_prime(2, 2);
    rho_prime(1, 1) = 0.01;
    rho_prime(0, 0) = -0.01;
    REQUIRE_THROWS_WITH(solve_sld(rho, rho_prime),
                        Catch::Matchers::ContainsSubstring("not channel-consistent"));
}

TEST_CASE("Dephasing qubit QFI matches the closed form", "[fisher][qfi]") {
    const ParamModel model = dephasing_qubit(1.0, 1.0);
    const Cmat rho0 = plus_state_density();
    const Cmat zero(2, 2);
    const auto traj = propagate(model, rho0, zero, 0.0, {0.0, 0.5}, {});
    const double f = qfi(traj.back().rho, traj.back().rho_prime);
    // 4 t^2 e^{-4t} at t = 1/2.
    REQUIRE(f == Approx(std::exp(-2.0)).epsilon(1e-6));
    REQUIRE(f == Approx(dephasing_qubit_qfi(1.0, 1.0, 0.5)).epsilon(1e-6));
}

TEST_CASE("Generator QFI basics", "[fisher][generator]") {
    SECTION("pure-state equality with four times the variance") {
        Cmat rho(2, 2);
        rho(0, 0) = 1.0;
        REQUIRE(qfi_wrt_operator(rho, pauli_x()) == Approx(4.0).margin(1e-10));
    }
    SECTION("maximally mixed states carry no generator information") {
        Cmat rho = Cmat::identity(2);
        rho *= cplx{0.5, 0.0};
        REQUIRE(qfi_wrt_operator(rho, pauli_y()) == Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("Generator QFI satisfies scaling, variance cap, and triangle inequality",
          "[fisher][generator][property]") {
    Rng rng(83);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + trial % 4;
        const bool pure = trial % 3 == 0;
        const Cmat rho = pure ? pure_density(rng.state(n)) : rng.density(n);
        const Cmat a = rng.hermitian(n);
        const Cmat b = rng.hermitian(n);
        const double fa = qfi_wrt_operator(rho, a);
        const double fb = qfi_wrt_operator(rho, b);

        // Affine reparametrization a*A + b*I scales the information by a^2.
        const double scale = 0.5 + rng.uniform();
        Cmat affine = a;
        affine *= cplx{scale, 0.0};
        affine += Cmat::identity(n) * cplx{rng.normal(), 0.0};
        REQUIRE(qfi_wrt_operator(rho, affine) ==
                Approx(scale * scale * fa).margin(1e-9 * (1.0 + scale * scale * fa)));

        const double var = variance(rho, a);
        REQUIRE(fa <= 4.0 * var + 1e-8);
        if (pure) REQUIRE(fa == Approx(4.0 * var).margin(1e-8 * (1.0 + fa)));

        REQUIRE(std::sqrt(qfi_wrt_operator(rho, a + b)) <=
                std::sqrt(fa) + std::sqrt(fb) + 1e-8);
    }
}

TEST_CASE("Growth rate matches finite differences of the simulated QFI", "[fisher][rate]") {
    const ParamModel model = dephasing_qubit(1.0, 1.0);
    const Cmat rho0 = plus_state_density();
    const Cmat zero(2, 2);
    const double dt = 1e-4;

    for (double t : {0.3, 0.5, 1.0}) {
        const auto traj = propagate(model, rho0, zero, 0.0, {0.0, t - dt, t, t + dt}, {});
        const SLD sld = solve_sld(traj[2].rho, traj[2].rho_prime);
        const double rate = qfi_rate(traj[2].rho, sld, model, t, 0.0);
        const double fd = (qfi(traj[3].rho, traj[3].rho_prime) -
                           qfi(traj[1].rho, traj[1].rho_prime)) /
                          (2.0 * dt);
        REQUIRE(rate == Approx(fd).margin(std::max(1e-5, 1e-3 * std::abs(rate))));
    }
}

TEST_CASE("Growth rate vanishes with a zero SLD and at the start", "[fisher][rate]") {
    const ParamModel model = dephasing_qubit(1.0, 1.0);
    const Cmat rho0 = plus_state_density();
    SLD sld;
    sld.operator_matrix = Cmat(2, 2);
    REQUIRE(qfi_rate(rho0, sld, model, 0.0, 0.0) == 0.0);

    // rho'(0) = 0 makes the true SLD zero, so the initial rate vanishes too.
    const Cmat zero(2, 2);
    const SLD sld0 = solve_sld(rho0, zero);
    REQUIRE(qfi_rate(rho0, sld0, model, 0.0, 0.0) == 0.0);
}

TEST_CASE("Growth rate matches finite differences on a random model", "[fisher][rate]") {
    Rng rng(89);
    const ParamModel model = random_constant_model(rng, 3, 2);
    const Cmat rho0 = rng.density(3);
    const Cmat zero(3, 3);
    const double t = 0.4;
    const double dt = 1e-4;

    const auto traj = propagate(model, rho0, zero, 0.2, {0.0, t - dt, t, t + dt}, {});
    const SLD sld = solve_sld(traj[2].rho, traj[2].rho_prime);
    const double rate = qfi_rate(traj[2].rho, sld, model, t, 0.2);
    const double fd =
        (qfi(traj[3].rho, traj[3].rho_prime) - qfi(traj[1].rho, traj[1].rho_prime)) / (2.0 * dt);
    REQUIRE(rate == Approx(fd).margin(std::max(1e-5, 1e-3 * std::abs(rate))));
}

TEST_CASE("Classical Fisher information formula and guards", "[fisher][classical]") {
    SECTION("zero derivatives give zero") {
        REQUIRE(classical_fi({0.5, 0.5}, {0.0, 0.0}) == 0.0);
    }
    SECTION("symmetric two-outcome case") {
        const double s = 0.3;
        REQUIRE(classical_fi({0.5, 0.5}, {s, -s}) == Approx(4.0 * s * s).epsilon(1e-12));
    }
    SECTION("negative probability is rejected") {
        REQUIRE_THROWS_AS(classical_fi({1.1, -0.1}, {0.0, 0.0}), std::invalid_argument);
    }
    SECTION("length mismatch is rejected") {
        REQUIRE_THROWS_AS(classical_fi({1.0}, {0.0, 0.0}), std::invalid_argument);
    }
}
