// hermitian_eig.hpp - cyclic Jacobi eigensolver for Hermitian matrices.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "complex_matrix.hpp"

namespace qfigrow {

// Eigenvalues ascending; column k of `vectors` is the eigenvector for eigenvalues[k].
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    Cmat vectors;
};

namespace detail {

inline double offdiag_norm(const Cmat& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace detail

// Cyclic complex Jacobi. Each rotation zeroes one off-diagonal pair; the phase of
// the pivot entry is absorbed into the rotation so the 2x2 problem is real.
// Sweeps run until the off-diagonal Frobenius norm drops below rel_tol * ||A||_F.
inline SpectralDecomposition eig_hermitian(const Cmat& a, double rel_tol = 1e-14) {
    a.require_square("eig_hermitian");
    require_hermitian(a, "eig_hermitian", 1e-9);
    const std::size_t n = a.rows();

    Cmat w = hermitize(a);
    Cmat v = Cmat::identity(n);
    const double scale = std::max(w.frobenius_norm(), 1e-300);

    const int max_sweeps = 60;
    int sweep = 0;
    while (detail::offdiag_norm(w) > rel_tol * scale) {
        if (++sweep > max_sweeps)
            throw std::runtime_error("eig_hermitian: Jacobi sweeps did not converge");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = w(p, q);
                const double r = std::abs(apq);
                if (r <= 1e-300) {
                    w(p, q) = 0.0;
                    w(q, p) = 0.0;
                    continue;
                }
                const cplx phase = apq / r;
                const double app = w(p, p).real();
                const double aqq = w(q, q).real();
                // tan(2 theta) = 2 r / (aqq - app), resolved for |theta| <= pi/4.
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx spq = s * phase;  // rotation entry J(p,q); J(q,p) = -conj(spq)

                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const cplx wip = w(i, p);
                    const cplx wiq = w(i, q);
                    w(i, p) = c * wip - std::conj(spq) * wiq;
                    w(i, q) = spq * wip + c * wiq;
                    w(p, i) = std::conj(w(i, p));
                    w(q, i) = std::conj(w(i, q));
                }
                w(p, p) = app - t * r;
                w(q, q) = aqq + t * r;
                w(p, q) = 0.0;
                w(q, p) = 0.0;

                for (std::size_t i = 0; i < n; ++i) {
                    const cplx vip = v(i, p);
                    const cplx viq = v(i, q);
                    v(i, p) = c * vip - std::conj(spq) * viq;
                    v(i, q) = spq * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return w(i, i).real() < w(j, j).real(); });

    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    out.vectors = Cmat(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = w(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

// V^dag M V, the representation of M in the eigenbasis columns of V.
inline Cmat to_basis(const Cmat& v, const Cmat& m) { return v.adjoint() * (m * v); }

// Largest singular value via the spectrum of A^dag A.
inline double operator_norm(const Cmat& a) {
    const Cmat g = a.adjoint() * a;
    const auto eig = eig_hermitian(g);
    const double top = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.back();
    return std::sqrt(std::max(top, 0.0));
}

inline double min_eigenvalue(const Cmat& a) {
    const auto eig = eig_hermitian(a);
    if (eig.eigenvalues.empty()) throw std::invalid_argument("min_eigenvalue: empty matrix");
    return eig.eigenvalues.front();
}

}  // namespace qfigrow
