// span.hpp - decompositions of H' over the operator span of the noise channels.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "../core/complex_matrix.hpp"
#include "../core/hermitian_eig.hpp"

namespace qfigrow {

// H' = G + alpha I + sum_j (conj(beta_j) L_j + beta_j L_j^dag)
//        + sum_jk gamma_jk L_j^dag L_k, with gamma Hermitian.
// A_j = i (beta_j I + sum_k gamma_jk L_k) are the channel operators whose
// accumulated weight enters the growth-rate bound.
struct SpanDecomposition {
    double alpha = 0.0;
    std::vector<cplx> beta;
    Cmat gamma;
    Cmat G;
    std::vector<Cmat> A_ops;
};

// Real coefficients of the span combination (alpha real, beta complex, gamma Hermitian).
struct SpanCoefficients {
    double alpha = 0.0;
    std::vector<cplx> beta;
    Cmat gamma;
};

namespace detail {

// Hermitian basis of the Lindblad span, excluding the identity:
// per channel L_j + L_j^dag, i(L_j^dag - L_j), L_j^dag L_j; per pair j < k
// L_j^dag L_k + L_k^dag L_j and i(L_j^dag L_k - L_k^dag L_j).
inline std::vector<Cmat> span_basis(const std::vector<Cmat>& lindblads, std::size_t dim) {
    std::vector<Cmat> basis;
    const std::size_t nj = lindblads.size();
    std::vector<Cmat> adj;
    adj.reserve(nj);
    for (const auto& l : lindblads) {
        if (l.rows() != dim || l.cols() != dim)
            throw std::invalid_argument("span_basis: Lindblad dimension mismatch");
        adj.push_back(l.adjoint());
    }
    for (std::size_t j = 0; j < nj; ++j) {
        basis.push_back(lindblads[j] + adj[j]);
        basis.push_back(kI * (adj[j] - lindblads[j]));
    }
    for (std::size_t j = 0; j < nj; ++j) basis.push_back(adj[j] * lindblads[j]);
    for (std::size_t j = 0; j < nj; ++j) {
        for (std::size_t k = j + 1; k < nj; ++k) {
            Cmat cross = adj[j] * lindblads[k];
            basis.push_back(cross + cross.adjoint());
            Cmat anti = cross - cross.adjoint();
            basis.push_back(kI * anti);
        }
    }
    return basis;
}

// Map a real coefficient vector over span_basis order back to (beta, gamma).
inline SpanCoefficients unpack_span_coefficients(const std::vector<double>& x,
                                                 std::size_t n_channels) {
    SpanCoefficients c;
    c.beta.assign(n_channels, cplx{});
    c.gamma = Cmat(n_channels, n_channels);
    std::size_t idx = 0;
    for (std::size_t j = 0; j < n_channels; ++j) {
        const double u = x[idx++];
        const double v = x[idx++];
        c.beta[j] = cplx{u, v};
    }
    for (std::size_t j = 0; j < n_channels; ++j) c.gamma(j, j) = x[idx++];
    for (std::size_t j = 0; j < n_channels; ++j) {
        for (std::size_t k = j + 1; k < n_channels; ++k) {
            const double re = x[idx++];
            const double im = x[idx++];
            c.gamma(j, k) = cplx{re, im};
            c.gamma(k, j) = cplx{re, -im};
        }
    }
    return c;
}

inline std::size_t span_dim(std::size_t n_channels) {
    return n_channels * n_channels + 2 * n_channels;
}

}  // namespace detail

inline SpanDecomposition build_decomposition(const Cmat& hp, const std::vector<Cmat>& lindblads,
                                             double alpha, const std::vector<cplx>& beta,
                                             const Cmat& gamma) {
    require_hermitian(hp, "build_decomposition: H'");
    const std::size_t n = hp.rows();
    const std::size_t nj = lindblads.size();
    if (beta.size() != nj) throw std::invalid_argument("build_decomposition: beta length mismatch");
    if (nj > 0) {
        if (gamma.rows() != nj || gamma.cols() != nj)
            throw std::invalid_argument("build_decomposition: gamma shape mismatch");
        require_hermitian(gamma, "build_decomposition: gamma");
    }

    Cmat combo = Cmat::identity(n);
    combo *= cplx{alpha, 0.0};
    for (std::size_t j = 0; j < nj; ++j) {
        combo += std::conj(beta[j]) * lindblads[j];
        combo += beta[j] * lindblads[j].adjoint();
    }
    for (std::size_t j = 0; j < nj; ++j)
        for (std::size_t k = 0; k < nj; ++k) {
            const cplx gjk = gamma(j, k);
            if (gjk != cplx{}) combo += gjk * (lindblads[j].adjoint() * lindblads[k]);
        }

    SpanDecomposition d;
    d.alpha = alpha;
    d.beta = beta;
    d.gamma = nj > 0 ? gamma : Cmat(0, 0);
    d.G = hermitize(hp - combo);
    for (std::size_t j = 0; j < nj; ++j) {
        Cmat a = Cmat::identity(n);
        a *= beta[j];
        for (std::size_t k = 0; k < nj; ++k)
            if (gamma(j, k) != cplx{}) a += gamma(j, k) * lindblads[k];
        a *= kI;
        d.A_ops.push_back(a);
    }
    return d;
}

struct SpanProjection {
    SpanCoefficients coefficients;
    Cmat G0;
    double residual_norm = 0.0;
};

// Least-squares projection of H' onto span{I, L_j, L_j^dag, L_j^dag L_k} in the
// trace inner product. The Gram matrix can be singular (Hermitian channels make
// basis elements coincide), so it is inverted through its spectral pseudo-inverse.
inline SpanProjection project_to_span(const Cmat& hp, const std::vector<Cmat>& lindblads) {
    require_hermitian(hp, "project_to_span: H'");
    const std::size_t n = hp.rows();
    const std::size_t nj = lindblads.size();

    std::vector<Cmat> basis = detail::span_basis(lindblads, n);
    basis.push_back(Cmat::identity(n));  // alpha direction kept last
    const std::size_t m = basis.size();

    Cmat gram(m, m);
    std::vector<double> rhs(m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b)
            gram(a, b) = cplx{trace_inner_product(basis[a], basis[b]).real(), 0.0};
        rhs[a] = trace_inner_product(basis[a], hp).real();
    }

    const auto eig = eig_hermitian(gram);
    const double cutoff = 1e-10 * std::max(eig.eigenvalues.back(), 1e-300);
    std::vector<double> x(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        if (eig.eigenvalues[k] <= cutoff) continue;
        cplx proj = 0.0;
        for (std::size_t a = 0; a < m; ++a) proj += std::conj(eig.vectors(a, k)) * rhs[a];
        for (std::size_t a = 0; a < m; ++a)
            x[a] += (eig.vectors(a, k) * proj).real() / eig.eigenvalues[k];
    }

    SpanProjection out;
    out.coefficients = detail::unpack_span_coefficients(x, nj);
    out.coefficients.alpha = x[m - 1];

    Cmat combo = Cmat::identity(n);
    combo *= cplx{out.coefficients.alpha, 0.0};
    for (std::size_t a = 0; a + 1 < m; ++a) combo += cplx{x[a], 0.0} * basis[a];
    out.G0 = hermitize(hp - combo);
    out.residual_norm = out.G0.frobenius_norm();
    return out;
}

}  // namespace qfigrow
