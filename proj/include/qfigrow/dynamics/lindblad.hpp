// lindblad.hpp - right-hand sides of the master equation and its g-derivative.

#pragma once

#include <vector>

#include "../core/complex_matrix.hpp"
#include "model.hpp"

namespace qfigrow {

namespace detail {

// Operators frozen at one (t, g). K = sum_j L_j^dag L_j; M collects the mixed
// derivative products sum_j (L_j'^dag L_j + L_j^dag L_j') when any L' is nonzero.
struct OpSet {
    Cmat H;
    Cmat Hp;
    std::vector<Cmat> L;
    std::vector<Cmat> Ld;
    std::vector<Cmat> Lp;
    Cmat K;
    Cmat M;
    bool any_lp = false;

    static OpSet at(const ParamModel& model, double t, double g) {
        OpSet s;
        const std::size_t n = model.dim;
        s.H = model.hamiltonian(t, g);
        s.Hp = model.hamiltonian_deriv ? model.hamiltonian_deriv(t, g) : Cmat(n, n);
        s.K = Cmat(n, n);
        for (std::size_t j = 0; j < model.lindblads.size(); ++j) {
            s.L.push_back(model.lindblads[j](t, g));
            s.Ld.push_back(s.L.back().adjoint());
            s.K += s.Ld.back() * s.L.back();
            if (j < model.lindblad_derivs.size() && model.lindblad_derivs[j]) {
                s.Lp.push_back(model.lindblad_derivs[j](t, g));
                if (s.Lp.back().max_abs() > 0.0) s.any_lp = true;
            } else {
                s.Lp.push_back(Cmat(n, n));
            }
        }
        if (s.any_lp) {
            s.M = Cmat(n, n);
            for (std::size_t j = 0; j < s.L.size(); ++j) {
                Cmat cross = s.Lp[j].adjoint() * s.L[j];
                s.M += cross;
                s.M += cross.adjoint();
            }
        }
        return s;
    }
};

// -i[H, rho] for Hermitian H, rho: one product plus its adjoint.
inline Cmat minus_i_commutator(const Cmat& h, const Cmat& rho) {
    Cmat x = h * rho;
    Cmat out = x - x.adjoint();
    out *= cplx{0.0, -1.0};
    return out;
}

// Dissipator applied to a Hermitian argument: sum_j L_j X L_j^dag - {K, X}/2.
inline Cmat dissipator(const OpSet& ops, const Cmat& x) {
    Cmat out(x.rows(), x.cols());
    for (std::size_t j = 0; j < ops.L.size(); ++j) out += (ops.L[j] * x) * ops.Ld[j];
    if (!ops.L.empty()) {
        Cmat kx = ops.K * x;
        kx += kx.adjoint();
        kx *= cplx{0.5, 0.0};
        out -= kx;
    }
    return out;
}

inline Cmat rho_rhs(const OpSet& ops, const Cmat& rho) {
    return minus_i_commutator(ops.H, rho) + dissipator(ops, rho);
}

inline Cmat rho_prime_rhs(const OpSet& ops, const Cmat& rho, const Cmat& rho_prime) {
    Cmat out = minus_i_commutator(ops.Hp, rho);
    out += minus_i_commutator(ops.H, rho_prime);
    out += dissipator(ops, rho_prime);
    if (ops.any_lp) {
        // d/dg of the dissipator acting on rho: L' rho L^dag + h.c. - {M, rho}/2.
        for (std::size_t j = 0; j < ops.L.size(); ++j) {
            Cmat p = (ops.Lp[j] * rho) * ops.Ld[j];
            out += p;
            out += p.adjoint();
        }
        Cmat mx = ops.M * rho;
        mx += mx.adjoint();
        mx *= cplx{0.5, 0.0};
        out -= mx;
    }
    return out;
}

}  // namespace detail

// d(rho)/dt at (t, g). Hermitian and traceless by construction of the generator.
inline Cmat lindblad_rhs(const ParamModel& model, double t, double g, const Cmat& rho) {
    model.validate();
    if (rho.rows() != model.dim || rho.cols() != model.dim)
        throw std::invalid_argument("lindblad_rhs: state dimension mismatch");
    return detail::rho_rhs(detail::OpSet::at(model, t, g), rho);
}

// d(rho')/dt at (t, g), including the terms sourced by g-dependent Lindblads.
inline Cmat derivative_rhs(const ParamModel& model, double t, double g, const Cmat& rho,
                           const Cmat& rho_prime) {
    model.validate();
    if (rho.rows() != model.dim || rho_prime.rows() != model.dim)
        throw std::invalid_argument("derivative_rhs: dimension mismatch");
    return detail::rho_prime_rhs(detail::OpSet::at(model, t, g), rho, rho_prime);
}

}  // namespace qfigrow
