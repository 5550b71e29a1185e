// rate_bound.hpp - instantaneous QFI growth-rate bound and its span optimization.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "../core/complex_matrix.hpp"
#include "../core/density.hpp"
#include "../core/hermitian_eig.hpp"
#include "../fisher/sld.hpp"
#include "span.hpp"

namespace qfigrow {

// 4 (sqrt(F_G/4 * F) + sum_j <A_j^dag A_j>) for a fixed decomposition of H'.
inline double rate_bound(const Cmat& rho, double qfi_value, const SpanDecomposition& decomp,
                         double rank_tol = kDefaultRankTol) {
    if (qfi_value < 0.0) throw std::invalid_argument("rate_bound: negative QFI");
    if (rho.rows() != decomp.G.rows()) throw std::invalid_argument("rate_bound: dimension mismatch");
    const double fg = std::max(qfi_wrt_operator(rho, decomp.G, rank_tol), 0.0);
    double sum_a = 0.0;
    for (const auto& a : decomp.A_ops) sum_a += expectation_real(rho, a.adjoint() * a);
    sum_a = std::max(sum_a, 0.0);
    return 2.0 * std::sqrt(fg * qfi_value) + 4.0 * sum_a;
}

struct OptimizedBound {
    SpanDecomposition decomposition;
    double bound = 0.0;
    bool converged = true;
};

namespace detail {

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    bool converged = false;
};

// Standard Nelder-Mead over R^d; good enough for the low-dimensional smooth
// objectives here. Returns the best vertex ever seen.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x0, double scale, int max_iter,
                                    double tol) {
    const std::size_t d = x0.size();
    NelderMeadResult res;
    if (d == 0) {
        res.x = x0;
        res.f = f(x0);
        res.converged = true;
        return res;
    }

    std::vector<std::vector<double>> pts(d + 1, x0);
    std::vector<double> vals(d + 1);
    for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += scale;
    for (std::size_t i = 0; i <= d; ++i) vals[i] = f(pts[i]);

    auto order = [&]() {
        std::vector<std::size_t> idx(d + 1);
        for (std::size_t i = 0; i <= d; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        std::vector<std::vector<double>> p2(d + 1);
        std::vector<double> v2(d + 1);
        for (std::size_t i = 0; i <= d; ++i) {
            p2[i] = pts[idx[i]];
            v2[i] = vals[idx[i]];
        }
        pts.swap(p2);
        vals.swap(v2);
    };

    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
        order();
        double spread = 0.0;
        for (std::size_t i = 0; i <= d; ++i) spread = std::max(spread, std::abs(vals[i] - vals[0]));
        double diam = 0.0;
        for (std::size_t i = 1; i <= d; ++i)
            for (std::size_t k = 0; k < d; ++k) diam = std::max(diam, std::abs(pts[i][k] - pts[0][k]));
        if (spread <= tol * (1.0 + std::abs(vals[0])) && diam <= tol * (1.0 + scale)) {
            converged = true;
            break;
        }

        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k < d; ++k) centroid[k] += pts[i][k] / static_cast<double>(d);

        auto blend = [&](double coef) {
            std::vector<double> x(d);
            for (std::size_t k = 0; k < d; ++k)
                x[k] = centroid[k] + coef * (pts[d][k] - centroid[k]);
            return x;
        };

        const std::vector<double> xr = blend(-1.0);
        const double fr = f(xr);
        if (fr < vals[0]) {
            const std::vector<double> xe = blend(-2.0);
            const double fe = f(xe);
            if (fe < fr) {
                pts[d] = xe;
                vals[d] = fe;
            } else {
                pts[d] = xr;
                vals[d] = fr;
            }
        } else if (fr < vals[d - 1]) {
            pts[d] = xr;
            vals[d] = fr;
        } else {
            const bool outside = fr < vals[d];
            const std::vector<double> xc = blend(outside ? -0.5 : 0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, vals[d])) {
                pts[d] = xc;
                vals[d] = fc;
            } else {
                for (std::size_t i = 1; i <= d; ++i) {
                    for (std::size_t k = 0; k < d; ++k)
                        pts[i][k] = pts[0][k] + 0.5 * (pts[i][k] - pts[0][k]);
                    vals[i] = f(pts[i]);
                }
            }
        }
    }
    order();
    res.x = pts[0];
    res.f = vals[0];
    res.converged = converged;
    return res;
}

}  // namespace detail

// Minimizes the growth-rate bound over the span coefficients (beta, gamma) by
// multistart Nelder-Mead; alpha is fixed afterwards to center the spectrum of
// G, which cannot change the bound. Always returns a valid (upper) bound: the
// reported value is the best evaluated feasible point.
inline OptimizedBound optimize_rate_bound(const Cmat& rho, double qfi_value, const Cmat& hp,
                                          const std::vector<Cmat>& lindblads,
                                          double rank_tol = kDefaultRankTol) {
    if (qfi_value < 0.0) throw std::invalid_argument("optimize_rate_bound: negative QFI");
    require_hermitian(rho, "optimize_rate_bound: rho");
    require_hermitian(hp, "optimize_rate_bound: H'");
    const std::size_t n = rho.rows();
    const std::size_t nj = lindblads.size();

    const auto rho_eig = eig_hermitian(rho);
    const double rho_trace = rho.trace().real();

    auto center_alpha = [](const Cmat& g0) {
        const auto eg = eig_hermitian(g0);
        return 0.5 * (eg.eigenvalues.front() + eg.eigenvalues.back());
    };

    auto finish = [&](const std::vector<double>& x, double bound, bool converged) {
        const auto coeffs = detail::unpack_span_coefficients(x, nj);
        Cmat gamma = nj > 0 ? coeffs.gamma : Cmat(0, 0);
        SpanDecomposition d0 = build_decomposition(hp, lindblads, 0.0, coeffs.beta, gamma);
        const double alpha = center_alpha(d0.G);
        OptimizedBound out;
        out.decomposition = build_decomposition(hp, lindblads, alpha, coeffs.beta, gamma);
        out.bound = bound;
        out.converged = converged;
        return out;
    };

    const std::size_t d = detail::span_dim(nj);
    if (nj == 0 || qfi_value == 0.0) {
        std::vector<double> zero(d, 0.0);
        const double fh = std::max(qfi_wrt_operator(rho_eig, rho_trace, hp, rank_tol), 0.0);
        const double bound = qfi_value == 0.0 ? 0.0 : 2.0 * std::sqrt(fh * qfi_value);
        return finish(zero, bound, true);
    }

    // Frozen per-state data: eigenbasis images of H' and the span basis, and
    // the channel moments entering sum <A_j^dag A_j>.
    const std::vector<Cmat> basis = detail::span_basis(lindblads, n);
    const Cmat hp_e = to_basis(rho_eig.vectors, hp);
    std::vector<Cmat> basis_e;
    basis_e.reserve(basis.size());
    for (const auto& b : basis) basis_e.push_back(to_basis(rho_eig.vectors, b));

    std::vector<cplx> l_mean(nj);
    Cmat ll_mean(nj, nj);
    for (std::size_t j = 0; j < nj; ++j) {
        l_mean[j] = expectation(rho, lindblads[j]);
        for (std::size_t k = 0; k < nj; ++k)
            ll_mean(j, k) = expectation(rho, lindblads[j].adjoint() * lindblads[k]);
    }

    const double threshold = rank_tol * std::abs(rho_trace);
    auto objective = [&](const std::vector<double>& x) {
        Cmat ge = hp_e;
        for (std::size_t m = 0; m < basis_e.size(); ++m)
            if (x[m] != 0.0) ge -= cplx{x[m], 0.0} * basis_e[m];
        double fg = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                const double s = rho_eig.eigenvalues[j] + rho_eig.eigenvalues[k];
                if (s <= threshold) continue;
                const double diff = rho_eig.eigenvalues[j] - rho_eig.eigenvalues[k];
                fg += 2.0 * diff * diff * std::norm(ge(j, k)) / s;
            }
        }
        const auto coeffs = detail::unpack_span_coefficients(x, nj);
        double sum_a = 0.0;
        for (std::size_t j = 0; j < nj; ++j) {
            cplx lin = 0.0;
            for (std::size_t k = 0; k < nj; ++k) lin += coeffs.gamma(j, k) * l_mean[k];
            double term = std::norm(coeffs.beta[j]) + 2.0 * (std::conj(coeffs.beta[j]) * lin).real();
            for (std::size_t k = 0; k < nj; ++k)
                for (std::size_t l = 0; l < nj; ++l)
                    term += (std::conj(coeffs.gamma(j, k)) * coeffs.gamma(j, l) * ll_mean(k, l)).real();
            sum_a += term;
        }
        sum_a = std::max(sum_a, 0.0);
        return 2.0 * std::sqrt(std::max(fg, 0.0) * qfi_value) + 4.0 * sum_a;
    };

    // Multistart: zero coefficients, the full span projection, and their midpoint.
    const auto projection = project_to_span(hp, lindblads);
    std::vector<double> x_proj(d, 0.0);
    {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < nj; ++j) {
            x_proj[idx++] = projection.coefficients.beta[j].real();
            x_proj[idx++] = projection.coefficients.beta[j].imag();
        }
        for (std::size_t j = 0; j < nj; ++j) x_proj[idx++] = projection.coefficients.gamma(j, j).real();
        for (std::size_t j = 0; j < nj; ++j)
            for (std::size_t k = j + 1; k < nj; ++k) {
                x_proj[idx++] = projection.coefficients.gamma(j, k).real();
                x_proj[idx++] = projection.coefficients.gamma(j, k).imag();
            }
    }
    std::vector<double> x_mid(d);
    double proj_scale = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        x_mid[k] = 0.5 * x_proj[k];
        proj_scale = std::max(proj_scale, std::abs(x_proj[k]));
    }
    const double scale = std::max(0.1, 0.25 * proj_scale);

    std::vector<std::vector<double>> starts = {std::vector<double>(d, 0.0), x_proj, x_mid};
    std::vector<double> best_x = starts[0];
    double best_f = objective(best_x);
    bool best_converged = true;
    for (const auto& s0 : starts) {
        const double f0 = objective(s0);
        if (f0 < best_f) {
            best_f = f0;
            best_x = s0;
            best_converged = true;
        }
        const auto r = detail::nelder_mead(objective, s0, scale, 400 * static_cast<int>(d), 1e-10);
        if (r.f < best_f) {
            best_f = r.f;
            best_x = r.x;
            best_converged = r.converged;
        }
    }
    return finish(best_x, best_f, best_converged);
}

}  // namespace qfigrow
