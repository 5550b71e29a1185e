// model.hpp - parameter-dependent Lindblad models and trajectory records.

#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "../core/complex_matrix.hpp"

namespace qfigrow {

// Operator-valued map over (time, parameter).
using OpMap = std::function<Cmat(double t, double g)>;

// Evolution model for a single estimated parameter g. Hamiltonian and Lindblad
// operators may depend on both t and g; *_deriv maps hold the g-derivatives.
// An empty lindblad_derivs list means every dL_j/dg is identically zero.
struct ParamModel {
    std::size_t dim = 0;
    OpMap hamiltonian;
    OpMap hamiltonian_deriv;
    std::vector<OpMap> lindblads;
    std::vector<OpMap> lindblad_derivs;

    // When false, operators are evaluated once per propagation and cached.
    bool time_dependent = false;
    // Truncated Fock models set this so propagation aborts on population
    // reaching the top two levels.
    bool monitor_top_levels = false;

    void validate() const {
        if (dim == 0) throw std::invalid_argument("ParamModel: dimension must be positive");
        if (!hamiltonian) throw std::invalid_argument("ParamModel: hamiltonian map missing");
        if (!lindblad_derivs.empty() && lindblad_derivs.size() != lindblads.size())
            throw std::invalid_argument("ParamModel: lindblad_derivs length mismatch");
    }

    bool has_lindblad_derivs() const {
        for (const auto& d : lindblad_derivs)
            if (d) return true;
        return false;
    }
};

struct TrajectoryPoint {
    double t = 0.0;
    Cmat rho;
    Cmat rho_prime;
    double qfi = 0.0;       // filled by the Fisher-information layer
    double qfi_rate = 0.0;  // filled by the Fisher-information layer
};

struct IntegratorConfig {
    double step = 1e-2;
    int substep_refinement = 1;
    bool hermitize_each_step = true;
    bool check_positivity = true;
    double positivity_tol = 1e-6;
    double leakage_tol = 1e-8;

    void validate() const {
        if (step <= 0.0) throw std::invalid_argument("IntegratorConfig: step must be positive");
        if (substep_refinement < 1)
            throw std::invalid_argument("IntegratorConfig: substep_refinement must be >= 1");
    }
};

// Self-check that the derivative maps match central finite differences of
// their parents at the sampled (t, g) points.
inline void check_model_derivatives(const ParamModel& model, const std::vector<double>& ts,
                                    const std::vector<double>& gs, double tol = 1e-6) {
    model.validate();
    for (double t : ts) {
        for (double g : gs) {
            const double delta = 1e-5 * std::max(1.0, std::abs(g));
            if (model.hamiltonian_deriv) {
                Cmat fd = model.hamiltonian(t, g + delta) - model.hamiltonian(t, g - delta);
                fd *= cplx{0.5 / delta, 0.0};
                const double err = (fd - model.hamiltonian_deriv(t, g)).frobenius_norm();
                if (err > tol)
                    throw std::runtime_error("check_model_derivatives: dH/dg mismatch " +
                                             std::to_string(err));
            }
            for (std::size_t j = 0; j < model.lindblads.size(); ++j) {
                Cmat fd = model.lindblads[j](t, g + delta) - model.lindblads[j](t, g - delta);
                fd *= cplx{0.5 / delta, 0.0};
                Cmat stated = (j < model.lindblad_derivs.size() && model.lindblad_derivs[j])
                                  ? model.lindblad_derivs[j](t, g)
                                  : Cmat(model.dim, model.dim);
                const double err = (fd - stated).frobenius_norm();
                if (err > tol)
                    throw std::runtime_error("check_model_derivatives: dL/dg mismatch on channel " +
                                             std::to_string(j) + ": " + std::to_string(err));
            }
        }
    }
}

}  // namespace qfigrow
