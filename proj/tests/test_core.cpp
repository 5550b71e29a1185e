// Dense complex linear algebra: matrix type, Hermitian eigendecomposition,
// matrix exponential, tensor helpers, and the random generators the property
// tests rely on.

#include <catch2/catch_amalgamated.hpp>

#include <qfigrow/qfigrow.hpp>

#include <cmath>
#include <complex>

using namespace qfigrow;
using Catch::Approx;

namespace {

double frob_distance(const Cmat& a, const Cmat& b) { return (a - b).frobenius_norm(); }

}  // namespace

TEST_CASE("Pauli matrices satisfy su(2) algebra", "[core][algebra]") {
    const Cmat sx = pauli_x();
    const Cmat sy = pauli_y();
    const Cmat sz = pauli_z();

    SECTION("squares are the identity") {
        REQUIRE(frob_distance(sx * sx, Cmat::identity(2)) == Approx(0.0).margin(1e-15));
        REQUIRE(frob_distance(sy * sy, Cmat::identity(2)) == Approx(0.0).margin(1e-15));
        REQUIRE(frob_distance(sz * sz, Cmat::identity(2)) == Approx(0.0).margin(1e-15));
    }

    SECTION("commutator [sx, sy] = 2i sz") {
        Cmat want = sz;
        want *= cplx{0.0, 2.0};
        REQUIRE(frob_distance(commutator(sx, sy), want) == Approx(0.0).margin(1e-15));
    }

    SECTION("anticommutator of distinct Paulis vanishes") {
        REQUIRE(anticommutator(sx, sy).max_abs() == Approx(0.0).margin(1e-15));
        REQUIRE(anticommutator(sy, sz).max_abs() == Approx(0.0).margin(1e-15));
    }

    SECTION("Pauli spectra are {-1, +1}") {
        for (const Cmat* m : {&sx, &sy, &sz}) {
            const auto eig = eig_hermitian(*m);
            REQUIRE(eig.eigenvalues.size() == 2);
            REQUIRE(eig.eigenvalues[0] == Approx(-1.0).margin(1e-14));
            REQUIRE(eig.eigenvalues[1] == Approx(1.0).margin(1e-14));
        }
    }
}

TEST_CASE("Hermitian eigendecomposition on random matrices", "[core][eig]") {
    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const Cmat a = rng.hermitian(n, 1.0 + trial * 0.1);
        const auto eig = eig_hermitian(a);
        const double scale = a.frobenius_norm();

        // Residual of the defining equation, columnwise: A v_k = lambda_k v_k.
        Cmat av = a * eig.vectors;
        Cmat vl = eig.vectors;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) vl(i, j) *= eig.eigenvalues[j];
        REQUIRE(frob_distance(av, vl) <= 1e-10 * std::max(scale, 1.0));

        // Eigenvectors are orthonormal and eigenvalues are sorted ascending.
        REQUIRE(frob_distance(eig.vectors.adjoint() * eig.vectors, Cmat::identity(n)) <= 1e-11);
        for (std::size_t k = 1; k < n; ++k)
            REQUIRE(eig.eigenvalues[k] >= eig.eigenvalues[k - 1]);
    }
}

TEST_CASE("Operator norm and minimum eigenvalue agree with the spectrum", "[core][eig]") {
    Rng rng(7);
    const Cmat a = rng.hermitian(6);
    const auto eig = eig_hermitian(a);
    const double lo = eig.eigenvalues.front();
    const double hi = eig.eigenvalues.back();
    REQUIRE(operator_norm(a) == Approx(std::max(std::abs(lo), std::abs(hi))).epsilon(1e-12));
    REQUIRE(min_eigenvalue(a) == Approx(lo).epsilon(1e-12));
}

TEST_CASE("Matrix exponential of skew-Hermitian exponents is unitary", "[core][exp]") {
    Rng rng(11);
    for (int trial = 0; trial < 6; ++trial) {
        const std::size_t n = 2 + trial;
        Cmat h = rng.hermitian(n, 1.5);
        h *= kI;
        const Cmat u = matrix_exp(h);
        REQUIRE(frob_distance(u.adjoint() * u, Cmat::identity(n)) <= 1e-12 * n);
    }
}

TEST_CASE("Matrix exponential reproduces a closed form", "[core][exp]") {
    // exp(i (pi/2) sx) = i sx, from the half-angle identity on Pauli rotations.
    Cmat arg = pauli_x();
    arg *= cplx{0.0, M_PI / 2.0};
    Cmat want = pauli_x();
    want *= kI;
    REQUIRE(frob_distance(matrix_exp(arg), want) <= 1e-13);
}

TEST_CASE("Displacement operators compose with the symplectic phase", "[core][oscillator]") {
    const std::size_t n_max = 40;
    const cplx alpha{0.7, -0.3};
    const cplx beta{-0.4, 0.55};

    const Cmat da = displacement_operator(n_max, alpha);
    const Cmat db = displacement_operator(n_max, beta);
    const Cmat dab = displacement_operator(n_max, alpha + beta);

    // D(a) D(b) = exp(i Im(a conj(b))) D(a+b); compared on the vacuum column,
    // where the Fock tail at n_max = 40 is far below the tolerance.
    const double phase = std::imag(alpha * std::conj(beta));
    Cmat lhs(n_max, 1), rhs(n_max, 1);
    for (std::size_t i = 0; i < n_max; ++i) {
        lhs(i, 0) = (da * db)(i, 0);
        rhs(i, 0) = std::exp(cplx{0.0, phase}) * dab(i, 0);
    }
    REQUIRE(frob_distance(lhs, rhs) <= 1e-8);
}

TEST_CASE("Kronecker product and partial traces are mutually consistent", "[core][tensor]") {
    Rng rng(23);
    const Cmat a = rng.density(3);
    const Cmat b = rng.density(4);
    const Cmat joint = kron(a, b);

    REQUIRE(joint.trace().real() == Approx(1.0).margin(1e-12));
    REQUIRE(frob_distance(partial_trace_second(joint, 3, 4), a) <= 1e-12);
    REQUIRE(frob_distance(partial_trace_first(joint, 3, 4), b) <= 1e-12);
}

TEST_CASE("Hermitize and defect measures", "[core][algebra]") {
    Rng rng(31);
    const Cmat g = rng.gaussian_matrix(5, 5);
    const Cmat h = hermitize(g);
    REQUIRE(is_hermitian(h));
    REQUIRE(hermiticity_defect(h) <= 1e-15 * h.frobenius_norm());
    // Projection property: hermitize leaves Hermitian input untouched.
    REQUIRE(frob_distance(hermitize(h), h) == 0.0);
}

TEST_CASE("Trace inner product matches elementwise sum", "[core][algebra]") {
    Rng rng(37);
    const Cmat a = rng.gaussian_matrix(4, 4);
    const Cmat b = rng.gaussian_matrix(4, 4);
    cplx direct = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) direct += std::conj(a(i, j)) * b(i, j);
    const cplx got = trace_inner_product(a, b);
    REQUIRE(std::abs(got - direct) <= 1e-13);
}

TEST_CASE("Random density matrices are valid states", "[core][random]") {
    Rng rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + trial % 4;
        const Cmat rho = (trial % 2 == 0) ? rng.density(n) : rng.density(n, 1);
        REQUIRE_NOTHROW(check_density(rho));
        if (trial % 2 != 0) REQUIRE(purity(rho) == Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("Basis change roundtrip", "[core][eig]") {
    Rng rng(61);
    const Cmat a = rng.hermitian(5);
    const auto eig = eig_hermitian(a);
    // In its own eigenbasis the operator is diagonal with the eigenvalues.
    const Cmat d = to_basis(eig.vectors, a);
    for (std::size_t i = 0; i < 5; ++i) {
        REQUIRE(d(i, i).real() == Approx(eig.eigenvalues[i]).margin(1e-11));
        for (std::size_t j = 0; j < 5; ++j)
            if (i != j) REQUIRE(std::abs(d(i, j)) <= 1e-11);
    }
}
