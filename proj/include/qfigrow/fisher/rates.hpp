// rates.hpp - exact QFI growth rate, classical Fisher information, trajectory annotation.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "../core/complex_matrix.hpp"
#include "../dynamics/lindblad.hpp"
#include "../dynamics/model.hpp"
#include "sld.hpp"

namespace qfigrow {

// dF/dt from the state, its SLD, and the model operators at (t, g):
//   2i tr(rho [H',L]) - sum_j tr(rho [L_j,L]^dag [L_j,L])
//   - 2 sum_j Re tr(rho (L_j'^dag [L_j,L] + L_j^dag [L_j',L]))   (when L_j' != 0)
inline double qfi_rate(const Cmat& rho, const SLD& sld, const ParamModel& model, double t,
                       double g) {
    model.validate();
    if (rho.rows() != model.dim || sld.operator_matrix.rows() != model.dim)
        throw std::invalid_argument("qfi_rate: dimension mismatch");
    const auto ops = detail::OpSet::at(model, t, g);
    const Cmat& l = sld.operator_matrix;

    const cplx hp_term = (rho * commutator(ops.Hp, l)).trace();
    double rate = (cplx{0.0, 2.0} * hp_term).real();

    for (std::size_t j = 0; j < ops.L.size(); ++j) {
        const Cmat c = commutator(ops.L[j], l);
        rate -= ((rho * c.adjoint()) * c).trace().real();
        if (ops.any_lp && ops.Lp[j].max_abs() > 0.0) {
            const Cmat cp = commutator(ops.Lp[j], l);
            const cplx mixed = ((rho * ops.Lp[j].adjoint()) * c).trace() +
                               ((rho * ops.Ld[j]) * cp).trace();
            rate -= 2.0 * mixed.real();
        }
    }
    return rate;
}

// Classical Fisher information of a discrete outcome distribution.
inline double classical_fi(const std::vector<double>& probabilities,
                           const std::vector<double>& derivatives,
                           double rank_tol = kDefaultRankTol) {
    if (probabilities.size() != derivatives.size())
        throw std::invalid_argument("classical_fi: length mismatch");
    double psum = 0.0, dsum = 0.0;
    for (std::size_t k = 0; k < probabilities.size(); ++k) {
        if (probabilities[k] < -1e-9)
            throw std::invalid_argument("classical_fi: negative probability " +
                                        std::to_string(probabilities[k]));
        psum += probabilities[k];
        dsum += derivatives[k];
    }
    if (std::abs(psum - 1.0) > 1e-9)
        throw std::invalid_argument("classical_fi: probabilities sum to " + std::to_string(psum));
    if (std::abs(dsum) > 1e-8)
        throw std::invalid_argument("classical_fi: derivatives sum to " + std::to_string(dsum));
    double fi = 0.0;
    for (std::size_t k = 0; k < probabilities.size(); ++k)
        if (probabilities[k] > rank_tol)
            fi += derivatives[k] * derivatives[k] / probabilities[k];
    return fi;
}

// Fill qfi and qfi_rate on every trajectory point.
inline void annotate_trajectory(std::vector<TrajectoryPoint>& traj, const ParamModel& model,
                                double g, double rank_tol = kDefaultRankTol) {
    for (auto& pt : traj) {
        const SLD sld = solve_sld(pt.rho, pt.rho_prime, rank_tol);
        pt.qfi = expectation_real(pt.rho, sld.operator_matrix * sld.operator_matrix);
        if (pt.qfi < 0.0 && pt.qfi > -1e-12) pt.qfi = 0.0;
        pt.qfi_rate = qfi_rate(pt.rho, sld, model, pt.t, g);
    }
}

}  // namespace qfigrow
