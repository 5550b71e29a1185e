// sld.hpp - symmetric logarithmic derivative and quantum Fisher information.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "../core/complex_matrix.hpp"
#include "../core/density.hpp"
#include "../core/hermitian_eig.hpp"

namespace qfigrow {

inline constexpr double kDefaultRankTol = 1e-12;

// L solving rho L + L rho = 2 rho'. kernel_dim counts the eigenpair blocks
// (j <= k) whose denominator fell below threshold and were set to zero.
struct SLD {
    Cmat operator_matrix;
    int kernel_dim = 0;
};

namespace detail {

// Shared worker: eigendecompose rho, transform rho' into that basis, and apply
// the element-wise division. Throws when rho' has weight on the joint kernel,
// which signals a (rho, rho') pair that no physical evolution produces.
struct SldBasisData {
    SpectralDecomposition eig;
    Cmat r_elem;     // rho' in the rho eigenbasis
    double threshold = 0.0;
};

inline SldBasisData sld_basis_data(const Cmat& rho, const Cmat& rho_prime, double rank_tol) {
    require_hermitian(rho, "solve_sld: rho");
    require_hermitian(rho_prime, "solve_sld: rho_prime");
    if (rho.rows() != rho_prime.rows())
        throw std::invalid_argument("solve_sld: dimension mismatch");
    SldBasisData d;
    d.eig = eig_hermitian(rho);
    d.r_elem = to_basis(d.eig.vectors, rho_prime);
    d.threshold = rank_tol * std::abs(rho.trace().real());
    const std::size_t n = rho.rows();
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j; k < n; ++k) {
            const double s = d.eig.eigenvalues[j] + d.eig.eigenvalues[k];
            if (s <= d.threshold && std::abs(d.r_elem(j, k)) > 1e-6)
                throw std::invalid_argument(
                    "solve_sld: rho_prime has weight " + std::to_string(std::abs(d.r_elem(j, k))) +
                    " on the kernel of rho; the pair is not channel-consistent");
        }
    }
    return d;
}

}  // namespace detail

inline SLD solve_sld(const Cmat& rho, const Cmat& rho_prime, double rank_tol = kDefaultRankTol) {
    auto d = detail::sld_basis_data(rho, rho_prime, rank_tol);
    const std::size_t n = rho.rows();
    Cmat l_elem(n, n);
    int zeroed = 0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            const double s = d.eig.eigenvalues[j] + d.eig.eigenvalues[k];
            if (s <= d.threshold) {
                l_elem(j, k) = 0.0;
                if (k >= j) ++zeroed;
            } else {
                l_elem(j, k) = 2.0 * d.r_elem(j, k) / s;
            }
        }
    }
    SLD out;
    out.operator_matrix = hermitize(d.eig.vectors * (l_elem * d.eig.vectors.adjoint()));
    out.kernel_dim = zeroed;
    return out;
}

// F = tr(rho L^2), evaluated directly as 2 sum |<j|rho'|k>|^2 / (p_j + p_k).
inline double qfi(const Cmat& rho, const Cmat& rho_prime, double rank_tol = kDefaultRankTol) {
    auto d = detail::sld_basis_data(rho, rho_prime, rank_tol);
    const std::size_t n = rho.rows();
    double f = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            const double s = d.eig.eigenvalues[j] + d.eig.eigenvalues[k];
            if (s > d.threshold) f += 2.0 * std::norm(d.r_elem(j, k)) / s;
        }
    }
    return f;
}

// F_A from a precomputed spectral decomposition of rho; the generator enters
// through i[rho, A], whose eigenbasis elements are i(p_j - p_k) A_jk.
inline double qfi_wrt_operator(const SpectralDecomposition& rho_eig, double rho_trace,
                               const Cmat& a, double rank_tol = kDefaultRankTol) {
    const std::size_t n = a.rows();
    if (rho_eig.eigenvalues.size() != n)
        throw std::invalid_argument("qfi_wrt_operator: dimension mismatch");
    const Cmat a_elem = to_basis(rho_eig.vectors, a);
    const double threshold = rank_tol * std::abs(rho_trace);
    double f = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            const double s = rho_eig.eigenvalues[j] + rho_eig.eigenvalues[k];
            if (s <= threshold) continue;
            const double diff = rho_eig.eigenvalues[j] - rho_eig.eigenvalues[k];
            f += 2.0 * diff * diff * std::norm(a_elem(j, k)) / s;
        }
    }
    return f;
}

inline double qfi_wrt_operator(const Cmat& rho, const Cmat& a, double rank_tol = kDefaultRankTol) {
    require_hermitian(rho, "qfi_wrt_operator: rho");
    require_hermitian(a, "qfi_wrt_operator: A");
    return qfi_wrt_operator(eig_hermitian(rho), rho.trace().real(), a, rank_tol);
}

}  // namespace qfigrow
