// density.hpp - density-matrix checks and elementary state functionals.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "complex_matrix.hpp"
#include "hermitian_eig.hpp"

namespace qfigrow {

// Throws unless rho is Hermitian, unit trace, and positive up to roundoff.
inline void check_density(const Cmat& rho, double trace_tol = 1e-10, double eig_tol = 1e-10) {
    require_hermitian(rho, "check_density");
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > trace_tol)
        throw std::invalid_argument("check_density: trace is " + std::to_string(tr) + ", expected 1");
    const double lo = min_eigenvalue(rho);
    if (lo < -eig_tol)
        throw std::invalid_argument("check_density: negative eigenvalue " + std::to_string(lo));
}

inline cplx expectation(const Cmat& rho, const Cmat& op) { return (rho * op).trace(); }

// <A> for a Hermitian observable; the imaginary part is roundoff and dropped.
inline double expectation_real(const Cmat& rho, const Cmat& op) {
    return expectation(rho, op).real();
}

inline double variance(const Cmat& rho, const Cmat& op) {
    const double mean = expectation_real(rho, op);
    const double second = expectation_real(rho, op * op);
    return second - mean * mean;
}

inline double purity(const Cmat& rho) { return (rho * rho).trace().real(); }

// |psi><psi| from a column vector, normalized.
inline Cmat pure_density(const Cmat& psi) {
    if (psi.cols() != 1) throw std::invalid_argument("pure_density: expected a column vector");
    double nrm2 = 0.0;
    for (std::size_t i = 0; i < psi.rows(); ++i) nrm2 += std::norm(psi(i, 0));
    if (nrm2 <= 0.0) throw std::invalid_argument("pure_density: zero vector");
    Cmat rho(psi.rows(), psi.rows());
    for (std::size_t i = 0; i < psi.rows(); ++i)
        for (std::size_t j = 0; j < psi.rows(); ++j)
            rho(i, j) = psi(i, 0) * std::conj(psi(j, 0)) / nrm2;
    return rho;
}

}  // namespace qfigrow
